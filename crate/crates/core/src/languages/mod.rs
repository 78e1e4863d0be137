//! Block languages `L_k`, J-expressions, Dyck, their formulas and oracles,
//! and the next-token-prediction dataset.

mod dataset;
mod dfa;

pub use dataset::{prediction_labels, read_jsonl, sample_dataset, write_jsonl, DatasetRecord};
pub use dfa::{altplus_dfa, alternating, dyck_member, subsequence_dfa, Dfa};

use thiserror::Error;

use crate::formula::{Alphabet, CmpOp, Formula, Term};

#[derive(Debug, Error)]
pub enum LangError {
    #[error("symbol `{0}` is not in the language's alphabet")]
    ForeignSymbol(char),
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("a bidirectional J-expression needs an odd number of symbols, got {0}")]
    EvenLength(usize),
    #[error("infeasible sampling request: {0}")]
    Infeasible(String),
    #[error("bad dataset line {line}: {msg}")]
    Record { line: usize, msg: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BlockLanguage {
    /// `L_k`: exactly k alternating blocks, starting with `a`.
    AltPlus(usize),
    /// `L_k` with `e` inserted anywhere.
    AltPlusNeutral(usize),
    /// Contains `abab...` (length k) as a subsequence.
    A(usize),
    /// Contains `baba...` (length k) as a subsequence.
    B(usize),
    /// `L_{2k-1}`.
    L2(usize),
}

impl BlockLanguage {
    pub fn alphabet(self) -> Alphabet {
        match self {
            BlockLanguage::AltPlusNeutral(_) => Alphabet::parse("abe").unwrap(),
            _ => Alphabet::parse("ab").unwrap(),
        }
    }

    pub fn dfa(self) -> Dfa {
        match self {
            BlockLanguage::AltPlus(k) => altplus_dfa(k, false),
            BlockLanguage::AltPlusNeutral(k) => altplus_dfa(k, true),
            BlockLanguage::A(k) => subsequence_dfa(&alternating('a', k), &['a', 'b']),
            BlockLanguage::B(k) => subsequence_dfa(&alternating('b', k), &['a', 'b']),
            BlockLanguage::L2(k) => altplus_dfa(2 * k - 1, false),
        }
    }

    pub fn member(self, w: &[char]) -> Result<bool, LangError> {
        let d = self.dfa();
        d.accepts(w).ok_or_else(|| {
            let c = w.iter().copied().find(|c| !d.alphabet.contains(c)).unwrap();
            LangError::ForeignSymbol(c)
        })
    }
}

fn at_least_one(t: Term) -> Formula {
    Formula::cmp(t, CmpOp::Ge, Term::constant(1))
}

/// `#<[...#<[#<[Q(σ1)] >= 1 && Q(σ2)] >= 1 ... && Q(σk)] >= 1`: some
/// `σ1 ... σk` occurs as a subsequence ending at or before the current
/// position. Depth k.
///
/// Where `σ(j-1) = σj` the inner level uses a strict count, so the same
/// position cannot serve both.
pub fn jexpr_formula(symbols: &[char]) -> Result<Formula, LangError> {
    if symbols.is_empty() {
        return Err(LangError::BadParameter("empty J-expression".into()));
    }
    Ok(left_chain(symbols, false))
}

/// Subsequence ending at or before (`strict`: strictly before) the current
/// position.
fn left_chain(symbols: &[char], strict: bool) -> Formula {
    let k = symbols.len();
    let last = Formula::sym(symbols[k - 1]);
    let body = if k == 1 {
        last
    } else {
        let prev = left_chain(&symbols[..k - 1], symbols[k - 2] == symbols[k - 1]);
        Formula::and(prev, last)
    };
    at_least_one(if strict {
        Term::count_left_strict(body)
    } else {
        Term::count_left(body)
    })
}

/// Subsequence starting at or after (`strict`: strictly after) the current
/// position.
fn right_chain(symbols: &[char], strict: bool) -> Formula {
    let first = Formula::sym(symbols[0]);
    let body = if symbols.len() == 1 {
        first
    } else {
        let rest = right_chain(&symbols[1..], symbols[0] == symbols[1]);
        Formula::and(first, rest)
    };
    at_least_one(if strict {
        Term::count_right_strict(body)
    } else {
        Term::count_right(body)
    })
}

/// For `2k+1` symbols: find the middle symbol and look left and right.
/// Depth k+1.
pub fn jexpr_formula_bidirectional(symbols: &[char]) -> Result<Formula, LangError> {
    let n = symbols.len();
    if n % 2 == 0 {
        return Err(LangError::EvenLength(n));
    }
    let k = n / 2;
    let mid = Formula::sym(symbols[k]);
    let mut parts = Vec::new();
    if k > 0 {
        parts.push(left_chain(&symbols[..k], symbols[k - 1] == symbols[k]));
    }
    parts.push(mid);
    if k > 0 {
        parts.push(right_chain(&symbols[k + 1..], symbols[k] == symbols[k + 1]));
    }
    Ok(at_least_one(Term::count_left(Formula::and_all(parts))))
}

/// `A_k`: contains `abab...` of length k.
pub fn a_formula(k: usize) -> Result<Formula, LangError> {
    jexpr_formula(&alternating('a', k))
}

/// `B_k`: contains `baba...` of length k.
pub fn b_formula(k: usize) -> Result<Formula, LangError> {
    jexpr_formula(&alternating('b', k))
}

/// `L_k = A_k ∖ B_k`, depth k. The construction is closed under inserting
/// letters other than `a`, `b`, so over `{a,b,e}` it defines the neutral
/// variant.
pub fn altplus_formula(k: usize, alphabet: &Alphabet) -> Result<Formula, LangError> {
    if k == 0 {
        return Err(LangError::BadParameter("k must be at least 1".into()));
    }
    for c in ['a', 'b'] {
        if !alphabet.contains(c) {
            return Err(LangError::BadParameter(format!("alphabet lacks `{c}`")));
        }
    }
    Ok(Formula::and(a_formula(k)?, Formula::not(b_formula(k)?)))
}

/// Balanced and never closing more than opened, depth 2.
pub fn dyck_formula() -> Formula {
    let open = Term::count_left(Formula::sym('('));
    let close = Term::count_left(Formula::sym(')'));
    let balanced = Formula::cmp(open.clone(), CmpOp::Eq, close.clone());
    let violates = Formula::cmp(open, CmpOp::Lt, close);
    let matched = Formula::cmp(Term::count_left(violates), CmpOp::Eq, Term::constant(0));
    Formula::and(balanced, matched)
}

/// Next-token prediction for `L_k`: on every prefix of a word in `L_k`, holds
/// iff the prefix is in `L_k`. `B_(k-2)` plus the symbol of the last block.
pub fn prediction_formula(k: usize) -> Result<Formula, LangError> {
    if k < 3 {
        return Err(LangError::BadParameter("prediction formula needs k >= 3".into()));
    }
    let last = if k % 2 == 1 { 'a' } else { 'b' };
    Ok(Formula::and(b_formula(k - 2)?, Formula::sym(last)))
}
