use std::collections::{BTreeSet, HashMap};

use super::synth::{bits_of, from_bits, synth_table};
use super::CompileError;
use crate::fixedpoint::{exp_round, Fixed, Precision};
use crate::formula::{CmpOp, Formula, Term};
use crate::transformer::{PositionalEncoding, Transformer};
use crate::transforms::Folder;

/// Size limits for [`decompile`].
#[derive(Debug, Clone, Copy)]
pub struct DecompileLimits {
    pub max_d: usize,
    pub max_p: u32,
    pub max_depth: usize,
}

impl Default for DecompileLimits {
    fn default() -> Self {
        DecompileLimits {
            max_d: 2,
            max_p: 4,
            max_depth: 2,
        }
    }
}

/// Bit formulas of one activation vector at word positions, with the
/// symbol table when the vector is still the embedding.
struct Bank {
    bits: Vec<Vec<Formula>>,
    symbols: Option<Vec<(char, Vec<i64>)>>,
}

impl Bank {
    fn flat(&self) -> Vec<Formula> {
        self.bits.iter().flatten().cloned().collect()
    }

    /// Every vector the bank may hold.
    fn domain(&self, prec: Precision) -> Vec<Vec<i64>> {
        match &self.symbols {
            Some(s) => s.iter().map(|(_, v)| v.clone()).collect(),
            None => {
                let d = self.bits.len();
                let mut out = vec![vec![]];
                for _ in 0..d {
                    out = out
                        .into_iter()
                        .flat_map(|v: Vec<i64>| {
                            (prec.min_sig()..=prec.max_sig()).map(move |m| {
                                let mut w = v.clone();
                                w.push(m);
                                w
                            })
                        })
                        .collect();
                }
                out
            }
        }
    }

    /// Formula for `g(h)`.
    fn synth(&self, fold: &Folder, prec: Precision, g: impl Fn(&[i64]) -> bool) -> Formula {
        match &self.symbols {
            Some(s) => {
                let yes: Vec<char> = s.iter().filter(|(_, v)| g(v)).map(|(c, _)| *c).collect();
                if yes.len() == s.len() {
                    Formula::truth(true)
                } else {
                    Formula::or_all(yes.into_iter().map(Formula::sym))
                }
            }
            None => {
                let p = prec.p as usize;
                let d = self.bits.len();
                let table: Vec<bool> = (0..(1usize << (d * p)))
                    .map(|a| {
                        let v: Vec<i64> = (0..d)
                            .map(|c| {
                                let bits: Vec<bool> = (0..p).map(|b| (a >> (c * p + b)) & 1 == 1).collect();
                                from_bits(&bits)
                            })
                            .collect();
                        g(&v)
                    })
                    .collect();
                synth_table(&self.flat(), &table, fold)
            }
        }
    }
}

/// `Σ_b w_b·#<[bit_b]` for a two's-complement quantity of `width` bits,
/// given its value at every domain vector.
fn weighted_count(
    bank: &Bank,
    fold: &Folder,
    prec: Precision,
    domain: &[Vec<i64>],
    values: &[i128],
    width: u32,
) -> Term {
    let at: HashMap<&[i64], i128> = domain.iter().map(|x| x.as_slice()).zip(values.iter().copied()).collect();
    let mut parts = Vec::new();
    for b in 0..width {
        let bit = bank.synth(fold, prec, |h| at.get(h).is_some_and(|v| (v >> b) & 1 == 1));
        let w: i64 = if b + 1 == width { -(1i64 << b) } else { 1i64 << b };
        parts.push(fold.scale(w, fold.count_left(bit)));
    }
    fold.sum_all(parts)
}

/// Bits `1..=p` of `clamp(floor(a / b))` for `b > 0`, by long division on
/// `a + 2^(p-1)·b`: the quotient bits are the offset-binary digits of the
/// result, saturation included.
pub fn division_bits(a: &Term, b: &Term, prec: Precision, fold: &mut Folder) -> Vec<Formula> {
    let p = prec.p;
    let t = fold.sum(a.clone(), fold.scale(1i64 << (p - 1), b.clone()));
    let mut digits: Vec<Formula> = vec![Formula::truth(false); p as usize];
    let mut rest = t;
    for k in (1..=p).rev() {
        let step = fold.scale(1i64 << (k - 1), b.clone());
        let bit = fold.cmp(rest.clone(), CmpOp::Ge, step.clone());
        rest = fold.sum(rest, Term::neg(fold.ite(bit.clone(), step, Term::constant(0))));
        digits[(k - 1) as usize] = bit;
    }
    let top = digits[(p - 1) as usize].clone();
    digits[(p - 1) as usize] = fold.not(top);
    digits
}

/// `τ_k`: true everywhere, depth k.
pub fn tautology(k: usize) -> Formula {
    let mut f = Formula::truth(true);
    for _ in 0..k {
        f = Formula::cmp(Term::count_left(f), CmpOp::Ge, Term::constant(1));
    }
    f
}

/// Formula accepting `w` iff the transformer accepts `BOS·w`, with depth
/// equal to the number of layers.
///
/// Every activation bit at a word position gets a formula. Attention is
/// handled per possible query value: numerator and denominator are sums of
/// bit-weighted counts plus the BOS contribution, and the rounded quotient
/// comes from a long-division chain of comparisons.
pub fn decompile(t: &Transformer) -> Result<Formula, CompileError> {
    decompile_with(t, DecompileLimits::default())
}

pub fn decompile_with(t: &Transformer, lim: DecompileLimits) -> Result<Formula, CompileError> {
    t.validate()?;
    let prec = t.precision;
    if !matches!(t.pe, PositionalEncoding::None) {
        return Err(CompileError::Limit("models with positional encodings cannot be decompiled".into()));
    }
    if t.d > lim.max_d || prec.p > lim.max_p || t.depth() > lim.max_depth {
        return Err(CompileError::Limit(format!(
            "decompile handles d <= {}, p <= {}, depth <= {}; got d = {}, p = {}, depth = {}",
            lim.max_d,
            lim.max_p,
            lim.max_depth,
            t.d,
            prec.p,
            t.depth()
        )));
    }
    let p = prec.p;
    let d = t.d;
    let mut fold = Folder::new();

    let symbols: Vec<(char, Vec<i64>)> = t.alphabet.iter().map(|c| (*c, t.embedding[c].clone())).collect();
    let bits: Vec<Vec<Formula>> = (0..d)
        .map(|c| {
            (0..p)
                .map(|b| {
                    Formula::or_all(
                        symbols
                            .iter()
                            .filter(|(_, v)| (v[c] >> b) & 1 == 1)
                            .map(|(s, _)| Formula::sym(*s)),
                    )
                })
                .collect()
        })
        .collect();
    let mut bank = Bank {
        bits,
        symbols: Some(symbols),
    };
    let mut h_bos = t.embedding[&t.bos].clone();

    for layer in &t.layers {
        let domain = bank.domain(prec);
        let qs: Vec<Vec<i64>> = domain.iter().map(|h| layer.wq.apply_total(h, prec)).collect();
        let ks: Vec<Vec<i64>> = domain.iter().map(|h| layer.wk.apply_total(h, prec)).collect();
        let vs: Vec<Vec<i64>> = domain.iter().map(|h| layer.wv.apply_total(h, prec)).collect();
        let k_bos = layer.wk.apply_total(&h_bos, prec);
        let v_bos = layer.wv.apply_total(&h_bos, prec);
        let image: BTreeSet<Vec<i64>> = qs.iter().cloned().collect();
        let weight = |q: &[i64], k: &[i64]| -> i64 {
            let acc: i128 = q.iter().zip(k).map(|(a, b)| *a as i128 * *b as i128).sum();
            let s = prec.round_shifted(acc, prec.s);
            exp_round(Fixed::from_sig(s, prec).expect("rounded"), prec).sig()
        };

        let mut num: Vec<Vec<Term>> = vec![Vec::new(); d];
        let mut den: Vec<Term> = Vec::new();
        let mut bos_positive = true;
        for qhat in &image {
            let sel = if image.len() == 1 {
                Formula::truth(true)
            } else {
                bank.synth(&fold, prec, |h| layer.wq.apply_total(h, prec) == *qhat)
            };
            let ws: Vec<i64> = ks.iter().map(|k| weight(qhat, k)).collect();
            let w_bos = weight(qhat, &k_bos);
            bos_positive &= w_bos > 0;
            let wvals: Vec<i128> = ws.iter().map(|&w| w as i128).collect();
            let b_part = fold.sum(
                weighted_count(&bank, &fold, prec, &domain, &wvals, p + 1),
                Term::constant(w_bos),
            );
            den.push(fold.ite(sel.clone(), b_part, Term::constant(0)));
            for c in 0..d {
                let prods: Vec<i128> = ws.iter().zip(&vs).map(|(&w, v)| w as i128 * v[c] as i128).collect();
                let a_part = fold.sum(
                    weighted_count(&bank, &fold, prec, &domain, &prods, 2 * p),
                    Term::constant(w_bos * v_bos[c]),
                );
                num[c].push(fold.ite(sel.clone(), a_part, Term::constant(0)));
            }
        }
        let b_term = fold.sum_all(den);
        let positive = if bos_positive {
            Formula::truth(true)
        } else {
            fold.cmp(b_term.clone(), CmpOp::Ge, Term::constant(1))
        };
        let n_term = fold.sum(Term::count_left(Formula::truth(true)), Term::constant(1));

        let mut c_bits = Vec::with_capacity(d);
        for (c, parts) in num.into_iter().enumerate() {
            let a_term = fold.sum_all(parts);
            let by_weight = division_bits(&a_term, &b_term, prec, &mut fold);
            let bits = if positive.as_bool() == Some(true) {
                by_weight
            } else {
                let vals: Vec<i128> = vs.iter().map(|v| v[c] as i128).collect();
                let v_term = fold.sum(
                    weighted_count(&bank, &fold, prec, &domain, &vals, p),
                    Term::constant(v_bos[c]),
                );
                let by_mean = division_bits(&v_term, &n_term, prec, &mut fold);
                by_weight
                    .into_iter()
                    .zip(by_mean)
                    .map(|(x, y)| fold.mux(positive.clone(), x, y))
                    .collect()
            };
            c_bits.push(bits);
        }

        // residual, coordinate-wise saturating sum
        let mut x_bits = Vec::with_capacity(d);
        for c in 0..d {
            let mut inputs = c_bits[c].clone();
            inputs.extend(bank.bits[c].iter().cloned());
            let pu = p as usize;
            let mut comp = Vec::with_capacity(pu);
            for b in 0..pu {
                let table: Vec<bool> = (0..(1usize << (2 * pu)))
                    .map(|a| {
                        let cv = from_bits(&bits_of(a as i64, p));
                        let hv = from_bits(&bits_of((a >> pu) as i64, p));
                        (prec.clamp(cv as i128 + hv as i128) >> b) & 1 == 1
                    })
                    .collect();
                comp.push(synth_table(&inputs, &table, &fold));
            }
            x_bits.push(comp);
        }
        let x_bank = Bank {
            bits: x_bits,
            symbols: None,
        };
        let mut next = Vec::with_capacity(d);
        for c in 0..d {
            let mut comp = Vec::with_capacity(p as usize);
            for b in 0..p {
                comp.push(x_bank.synth(&fold, prec, |x| (layer.f.apply_total(x, prec)[c] >> b) & 1 == 1));
            }
            next.push(comp);
        }
        bank = Bank {
            bits: next,
            symbols: None,
        };

        let c_bos = v_bos;
        let x_bos: Vec<i64> = c_bos
            .iter()
            .zip(&h_bos)
            .map(|(a, b)| prec.clamp(*a as i128 + *b as i128))
            .collect();
        h_bos = layer.f.apply_total(&x_bos, prec);
    }

    let out = bank.synth(&fold, prec, |h| t.w_out.apply_total(h, prec)[0] > 0);
    let have = crate::formula::depth(&out);
    Ok(if have < t.depth() {
        Formula::and(out, tautology(t.depth()))
    } else {
        out
    })
}
