use std::collections::HashMap;

use super::CompileError;
use crate::fixedpoint::{Fixed, Precision};
use crate::formula::Formula;
use crate::transforms::Folder;

/// Largest number of input bits a truth table is built over.
pub const MAX_SYNTH_BITS: usize = 16;

/// Formula for a Boolean function of `inputs`: `table[a]` is the value
/// when input `v` has truth `(a >> v) & 1`. Built by Shannon expansion on
/// the highest input first, sharing equal sub-tables.
pub fn synth_table(inputs: &[Formula], table: &[bool], fold: &Folder) -> Formula {
    assert_eq!(table.len(), 1 << inputs.len());
    let mut memo = HashMap::new();
    shannon(inputs, table, fold, &mut memo)
}

fn shannon(inputs: &[Formula], table: &[bool], fold: &Folder, memo: &mut HashMap<Vec<bool>, Formula>) -> Formula {
    if table.iter().all(|b| *b) {
        return Formula::truth(true);
    }
    if table.iter().all(|b| !*b) {
        return Formula::truth(false);
    }
    if let Some(f) = memo.get(table) {
        return f.clone();
    }
    let n = inputs.len();
    let half = table.len() / 2;
    let (lo, hi) = table.split_at(half);
    let out = if lo == hi {
        shannon(&inputs[..n - 1], lo, fold, memo)
    } else {
        let f_hi = shannon(&inputs[..n - 1], hi, fold, memo);
        let f_lo = shannon(&inputs[..n - 1], lo, fold, memo);
        fold.mux(inputs[n - 1].clone(), f_hi, f_lo)
    };
    memo.insert(table.to_vec(), out.clone());
    out
}

/// Bits `1..=p` of the significand of `x` (bit p is the sign).
pub fn bits_of(m: i64, width: u32) -> Vec<bool> {
    (0..width).map(|b| (m >> b) & 1 == 1).collect()
}

/// Read a two's-complement significand back from `width` bits.
pub fn from_bits(bits: &[bool]) -> i64 {
    let w = bits.len();
    let mut m = 0i64;
    for (k, &b) in bits.iter().enumerate() {
        if b {
            if k + 1 == w {
                m -= 1 << k;
            } else {
                m += 1 << k;
            }
        }
    }
    m
}

/// Bit formulas for `g ∘ F`, given bit formulas of each component of `F`.
///
/// `inputs[c][b]` holds iff bit `b+1` of component `c` is set. The result
/// has the same shape for the components of `g`. Only Boolean connectives are
/// added, so the depth is unchanged.
pub fn synth_function_formula(
    inputs: &[Vec<Formula>],
    prec: Precision,
    g: impl Fn(&[Fixed]) -> Vec<Fixed>,
) -> Result<Vec<Vec<Formula>>, CompileError> {
    let p = prec.p as usize;
    if inputs.iter().any(|c| c.len() != p) {
        return Err(CompileError::Limit(format!("every component needs {p} bit formulas")));
    }
    let n = inputs.len() * p;
    if n > MAX_SYNTH_BITS {
        return Err(CompileError::Limit(format!("{n} input bits exceed {MAX_SYNTH_BITS}")));
    }
    let flat: Vec<Formula> = inputs.iter().flatten().cloned().collect();
    let mut outs: Vec<Vec<Fixed>> = Vec::with_capacity(1 << n);
    for a in 0..(1usize << n) {
        let args: Vec<Fixed> = (0..inputs.len())
            .map(|c| {
                let bits: Vec<bool> = (0..p).map(|b| (a >> (c * p + b)) & 1 == 1).collect();
                Fixed::from_bits(&bits, prec)
            })
            .collect();
        let y = g(&args);
        if let Some(first) = outs.first() {
            if first.len() != y.len() {
                return Err(CompileError::Limit("g returned tuples of different arity".into()));
            }
        }
        if y.iter().any(|v| v.precision() != prec) {
            return Err(CompileError::Limit("g returned a value of another precision".into()));
        }
        outs.push(y);
    }
    let arity = outs[0].len();
    let fold = Folder::new();
    let mut result = Vec::with_capacity(arity);
    for c in 0..arity {
        let mut comp = Vec::with_capacity(p);
        for b in 0..p {
            let table: Vec<bool> = outs.iter().map(|y| (y[c].sig() >> b) & 1 == 1).collect();
            comp.push(synth_table(&flat, &table, &fold));
        }
        result.push(comp);
    }
    Ok(result)
}
