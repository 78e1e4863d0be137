//! Fixed-precision numbers `m · 2^-s` with a p-bit two's-complement
//! significand. Rounding is floor to the grid, saturating at both ends.

pub mod real;

use std::collections::HashMap;
use std::fmt;
use std::sync::{LazyLock, Mutex};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type ExactRational = BigRational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FixedError {
    #[error("precision needs 2 <= p <= 32 and 0 <= s < p, got p={p}, s={s}")]
    BadPrecision { p: u32, s: u32 },
    #[error("significand {m} is outside the range of p={p}")]
    OutOfRange { m: i64, p: u32 },
    #[error("bit index {b} is outside 1..={p}")]
    BadBit { b: u32, p: u32 },
    #[error("sum of denominators is zero")]
    ZeroDenominator,
    #[error("numerator and denominator lists differ in length or are empty")]
    BadLists,
    #[error("`{0}` is not a value on the grid")]
    NotOnGrid(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Precision {
    pub p: u32,
    pub s: u32,
}

impl Precision {
    pub fn new(p: u32, s: u32) -> Result<Self, FixedError> {
        if !(2..=32).contains(&p) || s >= p {
            return Err(FixedError::BadPrecision { p, s });
        }
        Ok(Precision { p, s })
    }

    pub fn min_sig(self) -> i64 {
        -(1i64 << (self.p - 1))
    }
    pub fn max_sig(self) -> i64 {
        (1i64 << (self.p - 1)) - 1
    }
    /// Number of grid points per unit.
    pub fn scale(self) -> i64 {
        1i64 << self.s
    }
    pub fn clamp(self, m: i128) -> i64 {
        m.clamp(self.min_sig() as i128, self.max_sig() as i128) as i64
    }
    pub fn contains_sig(self, m: i64) -> bool {
        (self.min_sig()..=self.max_sig()).contains(&m)
    }
    pub fn min(self) -> Fixed {
        Fixed { m: self.min_sig(), prec: self }
    }
    pub fn max(self) -> Fixed {
        Fixed { m: self.max_sig(), prec: self }
    }
    pub fn zero(self) -> Fixed {
        Fixed { m: 0, prec: self }
    }
    /// All values in ascending order.
    pub fn values(self) -> impl Iterator<Item = Fixed> {
        (self.min_sig()..=self.max_sig()).map(move |m| Fixed { m, prec: self })
    }
    /// Saturating floor of `num / 2^shift`, read as a significand.
    pub fn round_shifted(self, num: i128, shift: u32) -> i64 {
        self.clamp(num >> shift)
    }
    /// Saturating floor of the real number `num / den` (den > 0).
    pub fn round_ratio(self, num: i128, den: i128) -> i64 {
        debug_assert!(den > 0);
        match num.checked_mul(1i128 << self.s) {
            Some(x) => self.clamp(x.div_euclid(den)),
            None => {
                let q = (BigInt::from(num) << self.s).div_floor(&BigInt::from(den));
                self.clamp(q.to_i128().unwrap_or(if num > 0 { i128::MAX } else { i128::MIN }))
            }
        }
    }
}

impl fmt::Display for Precision {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F({},{})", self.p, self.s)
    }
}

/// A value `m · 2^-s`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Fixed {
    m: i64,
    prec: Precision,
}

impl PartialOrd for Fixed {
    fn partial_cmp(&self, other: &Self) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Fixed {
    fn cmp(&self, other: &Self) -> std::cmp::Ordering {
        self.to_rational().cmp(&other.to_rational())
    }
}

impl Fixed {
    pub fn from_sig(m: i64, prec: Precision) -> Result<Self, FixedError> {
        if !prec.contains_sig(m) {
            return Err(FixedError::OutOfRange { m, p: prec.p });
        }
        Ok(Fixed { m, prec })
    }
    pub(crate) fn sig_unchecked(m: i64, prec: Precision) -> Self {
        debug_assert!(prec.contains_sig(m));
        Fixed { m, prec }
    }
    pub fn sig(self) -> i64 {
        self.m
    }
    pub fn precision(self) -> Precision {
        self.prec
    }
    pub fn to_rational(self) -> BigRational {
        BigRational::new(BigInt::from(self.m), BigInt::one() << self.prec.s)
    }
    pub fn to_f64(self) -> f64 {
        self.m as f64 / self.prec.scale() as f64
    }

    /// Bit `b` (1-based); bit p is the sign bit.
    pub fn bit(self, b: u32) -> Result<bool, FixedError> {
        if b == 0 || b > self.prec.p {
            return Err(FixedError::BadBit { b, p: self.prec.p });
        }
        Ok((self.m >> (b - 1)) & 1 == 1)
    }

    /// Reassemble from bits 1..=p.
    pub fn from_bits(bits: &[bool], prec: Precision) -> Self {
        let p = prec.p as usize;
        let mut m: i64 = 0;
        for (k, &b) in bits.iter().enumerate().take(p) {
            if b {
                if k + 1 == p {
                    m -= 1i64 << (p - 1);
                } else {
                    m += 1i64 << k;
                }
            }
        }
        Fixed { m, prec }
    }

    /// Sum rounded back into the grid (saturating).
    pub fn saturating_add(self, other: Fixed) -> Fixed {
        Fixed {
            m: self.prec.clamp(self.m as i128 + other.m as i128),
            prec: self.prec,
        }
    }

    /// Exact decimal text, e.g. `-0.5`, `3`, `1.0625`.
    pub fn to_decimal_string(self) -> String {
        let s = self.prec.s;
        let neg = self.m < 0;
        let abs = (self.m as i128).unsigned_abs();
        let int = abs >> s;
        let frac = abs & ((1u128 << s) - 1);
        let mut out = String::new();
        if neg {
            out.push('-');
        }
        out.push_str(&int.to_string());
        if frac != 0 {
            // frac / 2^s = frac * 5^s / 10^s
            let digits = BigInt::from(frac) * BigInt::from(5).pow(s);
            let mut text = format!("{:0>width$}", digits.to_string(), width = s as usize);
            while text.ends_with('0') {
                text.pop();
            }
            out.push('.');
            out.push_str(&text);
        }
        out
    }

    /// Parse exact decimal text; the value must lie on the grid.
    pub fn from_decimal_str(text: &str, prec: Precision) -> Result<Self, FixedError> {
        let bad = || FixedError::NotOnGrid(text.to_string());
        let t = text.trim();
        let (neg, body) = match t.strip_prefix('-') {
            Some(r) => (true, r),
            None => (false, t),
        };
        let (ip, fp) = body.split_once('.').unwrap_or((body, ""));
        if ip.is_empty() || !ip.bytes().all(|c| c.is_ascii_digit()) || !fp.bytes().all(|c| c.is_ascii_digit()) {
            return Err(bad());
        }
        let num: BigInt = format!("{ip}{fp}").parse().map_err(|_| bad())?;
        let den = BigInt::from(10).pow(fp.len() as u32);
        let mut q = BigRational::new(num, den);
        if neg {
            q = -q;
        }
        let scaled = q * BigRational::from_integer(BigInt::one() << prec.s);
        if !scaled.is_integer() {
            return Err(bad());
        }
        let m = scaled.to_integer().to_i64().ok_or_else(bad)?;
        Fixed::from_sig(m, prec)
    }
}

impl fmt::Display for Fixed {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_decimal_string())
    }
}

/// Greatest grid value ≤ x, saturating at both ends.
pub fn round(x: &ExactRational, prec: Precision) -> Fixed {
    let scaled = (x * BigRational::from_integer(BigInt::one() << prec.s)).floor().to_integer();
    let m = if scaled < BigInt::from(prec.min_sig()) {
        prec.min_sig()
    } else if scaled > BigInt::from(prec.max_sig()) {
        prec.max_sig()
    } else {
        scaled.to_i64().expect("in range")
    };
    Fixed { m, prec }
}

/// Bit `b` of x (1-based, bit p is the sign).
pub fn bit(x: Fixed, b: u32) -> Result<bool, FixedError> {
    x.bit(b)
}

type ExpKey = (u32, u32, i64);
static EXP_CACHE: LazyLock<Mutex<HashMap<ExpKey, i64>>> = LazyLock::new(|| Mutex::new(HashMap::new()));

/// Floor of e^x on the grid of `prec`, saturating.
pub fn exp_round(x: Fixed, prec: Precision) -> Fixed {
    let key = (prec.p * 64 + prec.s, x.prec.p * 64 + x.prec.s, x.m);
    if let Some(&m) = EXP_CACHE.lock().unwrap().get(&key) {
        return Fixed { m, prec };
    }
    let m = exp_sig(x, prec);
    EXP_CACHE.lock().unwrap().insert(key, m);
    Fixed { m, prec }
}

fn exp_sig(x: Fixed, prec: Precision) -> i64 {
    if x.m == 0 {
        return prec.clamp(prec.scale() as i128);
    }
    let xr = x.to_rational();
    // e^x ≥ 2^x for x ≥ 0 and e^x < 2^-s whenever x ≤ -(s+1).
    if xr >= BigRational::from_integer(BigInt::from(prec.p as i64)) {
        return prec.max_sig();
    }
    if xr <= BigRational::from_integer(BigInt::from(-(prec.s as i64) - 1)) {
        return 0;
    }
    let q = real::floor_scaled(prec.s, |terms| real::exp_enclosure(&xr, terms));
    prec.clamp(q.to_i128().unwrap_or(i128::MAX))
}

/// round(Σ nums / Σ dens), with the sums kept exact.
pub fn sumdiv_round(
    nums: &[ExactRational],
    dens: &[ExactRational],
    prec: Precision,
) -> Result<Fixed, FixedError> {
    if nums.len() != dens.len() || nums.is_empty() {
        return Err(FixedError::BadLists);
    }
    let a: BigRational = nums.iter().fold(BigRational::zero(), |acc, x| acc + x);
    let b: BigRational = dens.iter().fold(BigRational::zero(), |acc, x| acc + x);
    if b.is_zero() {
        return Err(FixedError::ZeroDenominator);
    }
    Ok(round(&(a / b), prec))
}

/// Rounded sin and cos of the angle 2π·t/m: `(sin, cos, -sin)`, each
/// floored to the grid.
pub fn turn_table_entry(t: i64, m: i64, prec: Precision) -> (Fixed, Fixed, Fixed) {
    let key = (prec.p * 64 + prec.s, t.rem_euclid(m), m);
    if let Some(&e) = TURN_CACHE.lock().unwrap().get(&key) {
        return e;
    }
    let e = turn_entry(t, m, prec);
    TURN_CACHE.lock().unwrap().insert(key, e);
    e
}

type TurnKey = (u32, i64, i64);
static TURN_CACHE: LazyLock<Mutex<HashMap<TurnKey, (Fixed, Fixed, Fixed)>>> =
    LazyLock::new(|| Mutex::new(HashMap::new()));

fn turn_entry(t: i64, m: i64, prec: Precision) -> (Fixed, Fixed, Fixed) {
    let sin = floor_sin_turn(t, m, prec.s);
    let cos = floor_sin_turn(t * 4 + m, 4 * m, prec.s);
    let neg_sin = floor_sin_turn(-t, m, prec.s);
    (
        Fixed { m: prec.clamp(sin), prec },
        Fixed { m: prec.clamp(cos), prec },
        Fixed { m: prec.clamp(neg_sin), prec },
    )
}

fn floor_sin_turn(t: i64, m: i64, s: u32) -> i128 {
    if let Some(v) = real::sin_turn_exact(t, m) {
        let scaled = (v * BigRational::from_integer(BigInt::one() << s)).floor().to_integer();
        return scaled.to_i128().unwrap();
    }
    real::floor_scaled(s, |terms| real::sin_turn_enclosure(t, m, terms))
        .to_i128()
        .unwrap()
}
