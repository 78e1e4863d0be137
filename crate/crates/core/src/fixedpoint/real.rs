//! Rigorous enclosures of e^x, sin and cos with rational arithmetic.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

/// Enclosure [lo, hi] of e^x using `terms` Taylor terms. Requires x ≥ 0.
fn exp_nonneg(x: &BigRational, terms: usize) -> (BigRational, BigRational) {
    let mut sum = BigRational::zero();
    let mut term = BigRational::one();
    let mut n = 0usize;
    loop {
        sum += &term;
        n += 1;
        term = term * x / BigRational::from_integer(BigInt::from(n));
        // Once x/(n+1) ≤ 1/2 the tail is at most twice the next term.
        if n >= terms && BigRational::from_integer(BigInt::from(n + 1)) > x * rat(2, 1) {
            let tail = &term * rat(2, 1);
            return (sum.clone(), sum + tail);
        }
    }
}

/// Enclosure of e^x.
pub fn exp_enclosure(x: &BigRational, terms: usize) -> (BigRational, BigRational) {
    if x.is_negative() {
        let (lo, hi) = exp_nonneg(&-x, terms);
        (hi.recip(), lo.recip())
    } else {
        exp_nonneg(x, terms)
    }
}

/// floor(v · 2^s) for a real v known to lie in every enclosure produced by
/// `enclose(work)`, refining until both ends agree.
pub fn floor_scaled(
    s: u32,
    mut enclose: impl FnMut(usize) -> (BigRational, BigRational),
) -> BigInt {
    let scale = BigRational::from_integer(BigInt::one() << s);
    let mut work = 16;
    loop {
        let (lo, hi) = enclose(work);
        let a = (lo * &scale).floor().to_integer();
        let b = (hi * &scale).floor().to_integer();
        if a == b {
            return a;
        }
        work *= 2;
        assert!(work < 1 << 20, "enclosure refinement did not converge");
    }
}

/// Enclosure of π from Machin's formula; width shrinks with `terms`.
pub fn pi_enclosure(terms: usize) -> (BigRational, BigRational) {
    let (a_lo, a_hi) = atan_inv(5, terms);
    let (b_lo, b_hi) = atan_inv(239, terms);
    (
        a_lo * rat(16, 1) - b_hi * rat(4, 1),
        a_hi * rat(16, 1) - b_lo * rat(4, 1),
    )
}

// atan(1/q) as an alternating series: consecutive partial sums bracket it.
fn atan_inv(q: i64, terms: usize) -> (BigRational, BigRational) {
    let q2 = BigInt::from(q * q);
    let mut pow = BigInt::from(q);
    let mut sum = BigRational::zero();
    let mut prev = BigRational::zero();
    for n in 0..=terms {
        prev = sum.clone();
        let t = BigRational::new(BigInt::one(), &pow * BigInt::from(2 * n as i64 + 1));
        if n % 2 == 0 {
            sum += t;
        } else {
            sum -= t;
        }
        pow *= &q2;
    }
    if sum < prev {
        (sum, prev)
    } else {
        (prev, sum)
    }
}

/// Enclosure of sin(x) for 0 ≤ x ≤ 8 by Taylor partial sums. Terms
/// decrease once past x, so two consecutive sums bracket the value.
fn sin_point(x: &BigRational, terms: usize) -> (BigRational, BigRational) {
    let x2 = x * x;
    let mut term = x.clone();
    let mut sum = BigRational::zero();
    let mut prev;
    let mut n: i64 = 0;
    loop {
        prev = sum.clone();
        if n % 2 == 0 {
            sum += &term;
        } else {
            sum -= &term;
        }
        n += 1;
        term = term * &x2 / BigRational::from_integer(BigInt::from((2 * n) * (2 * n + 1)));
        if n as usize >= terms && n >= 8 {
            break;
        }
    }
    if sum < prev {
        (sum, prev)
    } else {
        (prev, sum)
    }
}

/// Enclosure of sin(2π·t/m), for the irrational cases only.
pub fn sin_turn_enclosure(t: i64, m: i64, terms: usize) -> (BigRational, BigRational) {
    let t = t.mod_floor(&m);
    let (p_lo, p_hi) = pi_enclosure(terms);
    let f = rat(2 * t, m);
    let x_lo = &p_lo * &f;
    let x_hi = &p_hi * &f;
    let width = &x_hi - &x_lo;
    let (s_lo, s_hi) = sin_point(&x_lo, terms);
    (s_lo - &width, s_hi + width)
}

/// Exact value of sin(2π·t/m) when it is rational (0, ±1/2, ±1).
pub fn sin_turn_exact(t: i64, m: i64) -> Option<BigRational> {
    let r = BigRational::new(BigInt::from(t.mod_floor(&m)), BigInt::from(m));
    let twelfths = &r * rat(12, 1);
    if !twelfths.is_integer() {
        return None;
    }
    let k = twelfths.to_integer();
    let k: i64 = k.try_into().ok()?;
    match k {
        0 | 6 => Some(rat(0, 1)),
        3 => Some(rat(1, 1)),
        9 => Some(rat(-1, 1)),
        1 | 5 => Some(rat(1, 2)),
        7 | 11 => Some(rat(-1, 2)),
        _ => None,
    }
}
