//! Random syntax trees in the parser's canonical shape, for property tests
//! and benchmark corpora.

use rand::Rng;

use super::ast::{CmpOp, Formula, Term};
use super::Alphabet;

#[derive(Debug, Clone)]
pub struct RandomConfig {
    pub alphabet: Alphabet,
    pub max_depth: usize,
    /// Allow `#>`, `#[..]`, `#o>`.
    pub future: bool,
    pub prev: bool,
    pub modulo: bool,
    pub ite: bool,
    /// Allow `#<o`.
    pub strict: bool,
    /// Bound on integer constants and coefficients.
    pub max_const: i64,
    /// Rough bound on the number of nodes.
    pub size: usize,
}

impl RandomConfig {
    /// Past-only trees over `alphabet`.
    pub fn past(alphabet: Alphabet, max_depth: usize) -> Self {
        RandomConfig {
            alphabet,
            max_depth,
            future: false,
            prev: false,
            modulo: false,
            ite: false,
            strict: false,
            max_const: 2,
            size: 12,
        }
    }

    pub fn full(alphabet: Alphabet, max_depth: usize) -> Self {
        RandomConfig {
            future: true,
            prev: true,
            modulo: true,
            ite: true,
            strict: true,
            ..Self::past(alphabet, max_depth)
        }
    }
}

pub fn random_formula<R: Rng>(rng: &mut R, cfg: &RandomConfig) -> Formula {
    let mut budget = cfg.size as i64;
    gen_formula(rng, cfg, cfg.max_depth, &mut budget)
}

/// A formula whose depth is exactly `cfg.max_depth`.
pub fn random_formula_of_depth<R: Rng>(rng: &mut R, cfg: &RandomConfig) -> Formula {
    loop {
        let f = random_formula(rng, cfg);
        if super::depth(&f) == cfg.max_depth {
            return f;
        }
    }
}

fn gen_formula<R: Rng>(rng: &mut R, cfg: &RandomConfig, depth: usize, budget: &mut i64) -> Formula {
    *budget -= 1;
    let leaf = *budget <= 0;
    let choice = if leaf { rng.gen_range(0..10) } else { rng.gen_range(0..20) };
    match choice {
        0..=6 => {
            if depth > 0 && !leaf && rng.gen_bool(0.5) {
                gen_compare(rng, cfg, depth, budget)
            } else {
                gen_atom(rng, cfg)
            }
        }
        7..=9 => {
            if depth > 0 {
                gen_compare(rng, cfg, depth, budget)
            } else {
                gen_atom(rng, cfg)
            }
        }
        10..=11 => Formula::not(gen_formula(rng, cfg, depth, budget)),
        12..=14 => Formula::and(
            gen_formula(rng, cfg, depth, budget),
            gen_formula(rng, cfg, depth, budget),
        ),
        15..=16 => Formula::or(
            gen_formula(rng, cfg, depth, budget),
            gen_formula(rng, cfg, depth, budget),
        ),
        17 if cfg.prev => Formula::prev(gen_formula(rng, cfg, depth, budget)),
        _ => gen_compare(rng, cfg, depth, budget),
    }
}

fn gen_atom<R: Rng>(rng: &mut R, cfg: &RandomConfig) -> Formula {
    let syms = cfg.alphabet.symbols();
    match rng.gen_range(0..10) {
        0 => Formula::truth(rng.gen_bool(0.5)),
        1 if cfg.modulo => {
            let m = rng.gen_range(1..=3);
            Formula::modulo(m, rng.gen_range(0..m))
        }
        _ => Formula::sym(syms[rng.gen_range(0..syms.len())]),
    }
}

fn gen_compare<R: Rng>(rng: &mut R, cfg: &RandomConfig, depth: usize, budget: &mut i64) -> Formula {
    let ops = [CmpOp::Lt, CmpOp::Le, CmpOp::Gt, CmpOp::Ge, CmpOp::Eq, CmpOp::Ne];
    let op = ops[rng.gen_range(0..ops.len())];
    let lhs = gen_term(rng, cfg, depth, budget);
    let rhs = gen_term(rng, cfg, depth, budget);
    Formula::cmp(lhs, op, rhs)
}

fn gen_term<R: Rng>(rng: &mut R, cfg: &RandomConfig, depth: usize, budget: &mut i64) -> Term {
    let n = rng.gen_range(1..=2);
    let mut acc = gen_factor(rng, cfg, depth, budget);
    for _ in 1..n {
        let f = gen_factor(rng, cfg, depth, budget);
        acc = if rng.gen_bool(0.5) {
            Term::sum(acc, f)
        } else {
            Term::sum(acc, Term::neg(f))
        };
    }
    acc
}

fn gen_factor<R: Rng>(rng: &mut R, cfg: &RandomConfig, depth: usize, budget: &mut i64) -> Term {
    *budget -= 1;
    let c = cfg.max_const.max(1);
    if depth == 0 || *budget <= 0 && rng.gen_bool(0.5) {
        return Term::constant(rng.gen_range(-c..=c));
    }
    match rng.gen_range(0..12) {
        0..=1 => Term::constant(rng.gen_range(0..=c)),
        2 => {
            let k = rng.gen_range(2..=c.max(2));
            Term::scale(k, gen_factor(rng, cfg, depth, budget))
        }
        3 if cfg.ite => {
            let cond = gen_formula(rng, cfg, depth, budget);
            let a = gen_term(rng, cfg, depth, budget);
            let b = gen_term(rng, cfg, depth, budget);
            Term::ite(cond, a, b)
        }
        4 if cfg.future => Term::count_right(gen_formula(rng, cfg, depth - 1, budget)),
        5 if cfg.future => Term::count_all(gen_formula(rng, cfg, depth - 1, budget)),
        6 if cfg.future && cfg.strict => {
            Term::count_right_strict(gen_formula(rng, cfg, depth - 1, budget))
        }
        7 if cfg.strict => Term::count_left_strict(gen_formula(rng, cfg, depth - 1, budget)),
        _ => Term::count_left(gen_formula(rng, cfg, depth - 1, budget)),
    }
}
