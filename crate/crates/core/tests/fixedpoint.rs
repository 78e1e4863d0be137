use craspkit::fixedpoint::*;
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn prec(p: u32, s: u32) -> Precision {
    Precision::new(p, s).unwrap()
}

fn q(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn fx(text: &str, pr: Precision) -> Fixed {
    Fixed::from_decimal_str(text, pr).unwrap()
}

#[test]
fn round_examples() {
    let p = prec(4, 1);
    assert_eq!(round(&q(7, 10), p), fx("0.5", p));
    assert_eq!(round(&q(-1, 10), p), fx("-0.5", p));
    assert_eq!(round(&q(3, 1), p), fx("3", p));
    // saturation at both ends
    assert_eq!(round(&q(100, 1), p), p.max());
    assert_eq!(round(&q(-100, 1), p), p.min());
    assert_eq!(p.max().to_decimal_string(), "3.5");
    assert_eq!(p.min().to_decimal_string(), "-4");
}

#[test]
fn precision_limits() {
    assert!(Precision::new(1, 0).is_err());
    assert!(Precision::new(4, 4).is_err());
    assert!(Precision::new(33, 0).is_err());
    assert!(Fixed::from_sig(8, prec(4, 1)).is_err());
    assert!(Fixed::from_sig(-8, prec(4, 1)).is_ok());
    assert_eq!(prec(8, 4).values().count(), 256);
}

#[test]
fn round_is_monotone_and_floor_like() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let p = prec(8, 3);
    let step = q(1, 8);
    for _ in 0..10_000 {
        let x = q(rng.gen_range(-20_000..20_000), rng.gen_range(1..1000));
        let y = q(rng.gen_range(-20_000..20_000), rng.gen_range(1..1000));
        let (lo, hi) = if x <= y { (x, y) } else { (y, x) };
        assert!(round(&lo, p) <= round(&hi, p));
        if lo >= p.min().to_rational() && lo <= p.max().to_rational() {
            let r = round(&lo, p).to_rational();
            assert!(r <= lo && lo < r + step.clone());
        }
    }
}

#[test]
fn bit_examples() {
    let p = prec(4, 1);
    let bits = |x: Fixed| (1..=4).map(|b| bit(x, b).unwrap()).collect::<Vec<_>>();
    assert_eq!(bits(fx("1.5", p)), vec![true, true, false, false]);
    assert_eq!(bits(fx("0", p)), vec![false; 4]);
    assert_eq!(bits(fx("-0.5", p)), vec![true; 4]);
    assert!(matches!(bit(fx("1", p), 0), Err(FixedError::BadBit { .. })));
    assert!(matches!(bit(fx("1", p), 5), Err(FixedError::BadBit { .. })));
}

#[test]
fn bits_reassemble_exhaustively() {
    for pp in 2..=8 {
        for s in 0..pp {
            let p = prec(pp, s);
            for x in p.values() {
                let bits: Vec<bool> = (1..=pp).map(|b| bit(x, b).unwrap()).collect();
                let mut m = if bits[pp as usize - 1] { -(1i64 << (pp - 1)) } else { 0 };
                for b in 0..pp as usize - 1 {
                    m += (bits[b] as i64) << b;
                }
                assert_eq!(m, x.sig());
                assert_eq!(Fixed::from_bits(&bits, p), x);
            }
        }
    }
}

#[test]
fn exp_examples() {
    let p = prec(8, 2);
    assert_eq!(exp_round(fx("0", p), p), fx("1", p));
    assert_eq!(exp_round(fx("-1", p), p), fx("0.25", p));
    assert_eq!(exp_round(fx("-4", p), p), fx("0", p));
    assert_eq!(exp_round(fx("1", p), p), fx("2.5", p));
    assert_eq!(exp_round(fx("20", p), p), p.max());
}

/// e^x to well past 40 digits: Taylor sum with enough terms that the tail
/// is below 10^-40 for |x| ≤ 8.
fn exp_series(x: &BigRational) -> BigRational {
    let mut term = BigRational::one();
    let mut sum = BigRational::zero();
    for k in 1..=80 {
        sum += term.clone();
        term = term * x / BigRational::from_integer(BigInt::from(k));
    }
    sum
}

#[test]
fn exp_matches_series_on_grid() {
    let p = prec(8, 4);
    let scale = BigRational::from_integer(BigInt::from(16));
    for x in p.values() {
        let want = (exp_series(&x.to_rational()) * scale.clone()).floor().to_integer();
        let want = want.clamp(BigInt::from(p.min_sig()), BigInt::from(p.max_sig()));
        assert_eq!(BigInt::from(exp_round(x, p).sig()), want, "x = {x}");
    }
}

#[test]
fn sumdiv_examples() {
    let ones = vec![q(1, 1); 3];
    assert_eq!(sumdiv_round(&ones, &ones, prec(4, 1)).unwrap(), fx("1", prec(4, 1)));
    assert_eq!(sumdiv_round(&[q(3, 1)], &[q(2, 1)], prec(4, 1)).unwrap(), fx("1.5", prec(4, 1)));
    let mut nums = vec![q(0, 1); 1000];
    nums[0] = q(1, 1);
    let dens = vec![q(1, 1); 1000];
    assert_eq!(sumdiv_round(&nums, &dens, prec(8, 4)).unwrap(), fx("0", prec(8, 4)));
    // 1000 terms of 1/64 sum to 15.625 exactly; rounding each first would give 0.
    let small = vec![q(1, 64); 1000];
    let one = vec![q(0, 1); 999].into_iter().chain([q(1, 1)]).collect::<Vec<_>>();
    assert_eq!(sumdiv_round(&small, &one, prec(8, 3)).unwrap(), fx("15.625", prec(8, 3)));
    assert_eq!(sumdiv_round(&[q(1, 1)], &[q(0, 1)], prec(4, 1)), Err(FixedError::ZeroDenominator));
    assert_eq!(sumdiv_round(&[], &[], prec(4, 1)), Err(FixedError::BadLists));
}

#[test]
fn decimal_text_round_trip() {
    for p in [prec(4, 1), prec(8, 4), prec(12, 4), prec(16, 10)] {
        for x in p.values().step_by(7) {
            assert_eq!(Fixed::from_decimal_str(&x.to_decimal_string(), p).unwrap(), x);
        }
    }
    assert!(matches!(
        Fixed::from_decimal_str("0.3", prec(4, 1)),
        Err(FixedError::NotOnGrid(_))
    ));
    assert_eq!(fx("-1.0625", prec(8, 4)).sig(), -17);
}

#[test]
fn turn_table_quarter_points() {
    let p = prec(8, 4);
    let (s, c, n) = turn_table_entry(1, 4, p);
    assert_eq!((s.sig(), c.sig(), n.sig()), (16, 0, -16));
    let (s, c, _) = turn_table_entry(1, 8, p);
    // sin(π/4) ≈ 0.7071 → floor to 11/16
    assert_eq!((s.sig(), c.sig()), (11, 11));
    let (s, c, n) = turn_table_entry(0, 3, p);
    assert_eq!((s.sig(), c.sig(), n.sig()), (0, 16, 0));
}
