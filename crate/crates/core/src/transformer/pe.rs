use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::fixedpoint::{turn_table_entry, Fixed, Precision};

/// Angle 2π·phase/period for one coordinate pair.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Angle {
    pub period: u32,
    pub phase: u32,
}

/// Rounded rotation entries for one residue.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Rotation {
    pub sin: i64,
    pub cos: i64,
    pub neg_sin: i64,
}

impl Angle {
    /// One entry per residue t ∈ [0, period): rounded sin/cos of 2π·t/period.
    pub fn table(&self, prec: Precision) -> Vec<Rotation> {
        (0..self.period as i64)
            .map(|t| {
                let (s, c, n) = turn_table_entry(t, self.period as i64, prec);
                Rotation {
                    sin: s.sig(),
                    cos: c.sig(),
                    neg_sin: n.sig(),
                }
            })
            .collect()
    }

    /// Residue index of the angle `power · θ`.
    pub fn residue(&self, power: u64) -> usize {
        ((power % self.period as u64) * self.phase as u64 % self.period as u64) as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(tag = "kind", content = "params", rename_all = "lowercase")]
pub enum PositionalEncoding {
    #[default]
    None,
    /// Adds the rotated (sin 0, cos 0) pair to each embedding pair.
    Sinusoidal { angles: Vec<Angle> },
    /// Rotates queries and keys pairwise before the dot product.
    Rope { angles: Vec<Angle> },
    /// Subtracts `a·(i−j)` from each score; `a` is a significand.
    Alibi { a: i64 },
}

/// Precomputed rotation tables for a list of angles.
#[derive(Debug, Clone)]
pub struct RotationTables {
    pub angles: Vec<Angle>,
    pub tables: Vec<Vec<Rotation>>,
}

impl RotationTables {
    pub fn new(angles: &[Angle], prec: Precision) -> Self {
        RotationTables {
            angles: angles.to_vec(),
            tables: angles.iter().map(|a| a.table(prec)).collect(),
        }
    }

    pub fn at(&self, pair: usize, power: u64) -> Rotation {
        self.tables[pair][self.angles[pair].residue(power)]
    }

    /// Rotate significands pairwise; result is in units of 2^-2s.
    pub fn rotate(&self, x: &[i64], power: u64) -> Vec<i128> {
        let mut out = vec![0i128; x.len()];
        for c in 0..x.len() / 2 {
            let r = self.at(c, power);
            let (a, b) = (x[2 * c] as i128, x[2 * c + 1] as i128);
            out[2 * c] = r.cos as i128 * a + r.neg_sin as i128 * b;
            out[2 * c + 1] = r.sin as i128 * a + r.cos as i128 * b;
        }
        out
    }

    /// The sinusoidal offset for position i: rotation^(i-1) applied to
    /// (0, 1, 0, 1, …), i.e. the pairs (round(−sin), round(cos)).
    pub fn sinusoidal_offset(&self, i: u64) -> Vec<i64> {
        let mut out = Vec::with_capacity(2 * self.angles.len());
        for c in 0..self.angles.len() {
            let r = self.at(c, i - 1);
            out.push(r.neg_sin);
            out.push(r.cos);
        }
        out
    }
}

/// Smallest Δ with `bound − a·Δ ≤ −(s+1)·ln 2` (so every exp weight at
/// distance ≥ Δ floors to zero). `bound` and `a` are exact rationals, a > 0.
pub fn alibi_window(a: &BigRational, bound: &BigRational, prec: Precision) -> u64 {
    // ln 2 < 6932/10000
    let ln2_hi = BigRational::new(BigInt::from(6932), BigInt::from(10000));
    let target = bound + ln2_hi * BigRational::from_integer(BigInt::from(prec.s as i64 + 1));
    let q = (target / a).ceil().to_integer();
    q.to_u64().unwrap_or(0).max(1)
}

/// Window for scores bounded by the largest grid value.
pub fn alibi_window_for_grid(a: Fixed, prec: Precision) -> u64 {
    let bound = prec.max().to_rational();
    alibi_window(&a.to_rational(), &bound, prec)
}
