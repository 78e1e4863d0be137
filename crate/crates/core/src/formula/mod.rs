//! Counting temporal logic: syntax tree, text format, depth, and semantics.
//!
//! Positions are 1-based. `#<[φ]` counts positions `j ≤ i` where φ holds,
//! `#>[φ]` counts `j ≥ i`; a word is accepted when the formula holds at its
//! last position.

mod ast;
mod depth;
mod eval;
mod parse;
mod print;
pub mod random;

pub use ast::{
    features, moduli, prev_depth, symbols, CmpOp, Dialect, Features, Formula, FormulaKind, Term,
    TermKind,
};
pub use depth::{depth, depth_term};
pub use eval::{
    accepts, eval_dispatch, eval_formula, eval_positions, eval_term, Evaluator, PastEvaluator,
};
pub use parse::{parse, parse_any};
pub(crate) use parse::Parser;
pub use print::{print, print_term, printed_len};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FormulaError {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("symbol `{0}` is not in the alphabet")]
    UnknownSymbol(char),
    #[error("MOD({m},{r}) needs m >= 1 and 0 <= r < m")]
    BadModulus { m: i64, r: i64 },
    #[error("the empty word has no positions")]
    EmptyWord,
    #[error("position {i} is outside 1..={n}")]
    PositionOutOfRange { i: usize, n: usize },
    #[error("dialect: {0}")]
    Dialect(String),
    #[error("integer overflow while evaluating a term")]
    Overflow,
    #[error("invalid alphabet: {0}")]
    Alphabet(String),
}

/// Marks the beginning of a string at the transformer interface.
pub const BOS: char = '^';

/// Ordered set of single-character symbols.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Alphabet(Vec<char>);

impl Alphabet {
    pub fn new(symbols: impl IntoIterator<Item = char>) -> Result<Self, FormulaError> {
        let mut out: Vec<char> = Vec::new();
        for c in symbols {
            if c == BOS {
                return Err(FormulaError::Alphabet(format!("`{BOS}` is reserved for BOS")));
            }
            if c.is_whitespace() {
                return Err(FormulaError::Alphabet("whitespace symbol".into()));
            }
            if out.contains(&c) {
                return Err(FormulaError::Alphabet(format!("duplicate symbol `{c}`")));
            }
            out.push(c);
        }
        if out.is_empty() {
            return Err(FormulaError::Alphabet("no symbols".into()));
        }
        Ok(Alphabet(out))
    }

    /// Alphabet from the characters of `s`, e.g. `"ab"`.
    pub fn parse(s: &str) -> Result<Self, FormulaError> {
        Self::new(s.chars())
    }

    pub fn symbols(&self) -> &[char] {
        &self.0
    }
    pub fn contains(&self, c: char) -> bool {
        self.0.contains(&c)
    }
    pub fn len(&self) -> usize {
        self.0.len()
    }
    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Union preserving first-seen order.
    pub fn union(&self, other: &Alphabet) -> Alphabet {
        let mut v = self.0.clone();
        for &c in &other.0 {
            if !v.contains(&c) {
                v.push(c);
            }
        }
        Alphabet(v)
    }

    pub fn check_word(&self, w: &[char]) -> Result<(), FormulaError> {
        match w.iter().find(|c| !self.contains(**c)) {
            Some(&c) => Err(FormulaError::UnknownSymbol(c)),
            None => Ok(()),
        }
    }
}

impl std::fmt::Display for Alphabet {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0.iter().collect::<String>())
    }
}
