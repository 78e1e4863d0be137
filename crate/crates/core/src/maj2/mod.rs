//! Two-variable majority logic over ordered positions.
//!
//! `MAJy<ψ1; …; ψm>` holds when the number of pairs (position for y,
//! index ℓ) satisfying ψℓ exceeds `n·m/2`. `Ex[φ]` and `Ax[φ]` are sugar
//! for `MAJx<φ; TRUE>` and `!MAJx<!φ; TRUE>`.

mod eval;
mod parse;
mod print;
mod translate;

pub use eval::{accepts_end, eval_maj2, eval_table, Assignment};
pub use parse::{parse_maj2, parse_maj2_any};
pub use print::print_maj2;
pub use translate::{end_wrapper, maj2_to_tl, tl_to_maj2};

use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Maj2Error {
    #[error("syntax error at line {line}, column {col}: {msg}")]
    Syntax { line: usize, col: usize, msg: String },
    #[error("symbol `{0}` is not in the alphabet")]
    UnknownSymbol(char),
    #[error("variable {0} is free but unassigned")]
    Unbound(Var),
    #[error("the empty word has no positions")]
    EmptyWord,
    #[error("position {i} is outside 1..={n}")]
    PositionOutOfRange { i: usize, n: usize },
    #[error("both x and y are free")]
    TwoFreeVariables,
    #[error("dialect: {0}")]
    Dialect(String),
    #[error(transparent)]
    Formula(#[from] crate::formula::FormulaError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Var {
    X,
    Y,
}

impl Var {
    pub fn other(self) -> Var {
        match self {
            Var::X => Var::Y,
            Var::Y => Var::X,
        }
    }
    fn index(self) -> usize {
        self as usize
    }
    pub fn name(self) -> char {
        match self {
            Var::X => 'x',
            Var::Y => 'y',
        }
    }
}

impl std::fmt::Display for Var {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum Maj2Formula {
    Sym(char, Var),
    Less(Var, Var),
    Bool(bool),
    Not(Box<Maj2Formula>),
    And(Box<Maj2Formula>, Box<Maj2Formula>),
    Or(Box<Maj2Formula>, Box<Maj2Formula>),
    Maj(Var, Vec<Maj2Formula>),
    Exists(Var, Box<Maj2Formula>),
    Forall(Var, Box<Maj2Formula>),
}

use Maj2Formula as M;

impl Maj2Formula {
    pub fn sym(c: char, v: Var) -> Self {
        M::Sym(c, v)
    }
    pub fn less(a: Var, b: Var) -> Self {
        M::Less(a, b)
    }
    pub fn not(a: Maj2Formula) -> Self {
        M::Not(Box::new(a))
    }
    pub fn and(a: Maj2Formula, b: Maj2Formula) -> Self {
        M::And(Box::new(a), Box::new(b))
    }
    pub fn or(a: Maj2Formula, b: Maj2Formula) -> Self {
        M::Or(Box::new(a), Box::new(b))
    }
    pub fn maj(v: Var, items: Vec<Maj2Formula>) -> Self {
        assert!(!items.is_empty(), "MAJ needs at least one formula");
        M::Maj(v, items)
    }
    pub fn exists(v: Var, a: Maj2Formula) -> Self {
        M::Exists(v, Box::new(a))
    }
    pub fn forall(v: Var, a: Maj2Formula) -> Self {
        M::Forall(v, Box::new(a))
    }
    /// `a = b` as `!(a < b) && !(b < a)`.
    pub fn equal(a: Var, b: Var) -> Self {
        Self::and(Self::not(Self::less(a, b)), Self::not(Self::less(b, a)))
    }

    /// Free variables, as a (x, y) pair of flags.
    pub fn free(&self) -> [bool; 2] {
        let mut out = [false; 2];
        free_into(self, [false; 2], &mut out);
        out
    }

    pub fn is_closed(&self) -> bool {
        self.free() == [false, false]
    }

    /// Replace `E` and `A` by their majority encodings.
    pub fn desugar(&self) -> Maj2Formula {
        match self {
            M::Sym(..) | M::Less(..) | M::Bool(_) => self.clone(),
            M::Not(a) => M::not(a.desugar()),
            M::And(a, b) => M::and(a.desugar(), b.desugar()),
            M::Or(a, b) => M::or(a.desugar(), b.desugar()),
            M::Maj(v, items) => M::Maj(*v, items.iter().map(|f| f.desugar()).collect()),
            M::Exists(v, a) => M::Maj(*v, vec![a.desugar(), M::Bool(true)]),
            M::Forall(v, a) => M::not(M::Maj(*v, vec![M::not(a.desugar()), M::Bool(true)])),
        }
    }
}

fn free_into(f: &Maj2Formula, bound: [bool; 2], out: &mut [bool; 2]) {
    let mut mark = |v: Var| {
        if !bound[v.index()] {
            out[v.index()] = true;
        }
    };
    match f {
        M::Sym(_, v) => mark(*v),
        M::Less(a, b) => {
            mark(*a);
            mark(*b);
        }
        M::Bool(_) => {}
        M::Not(a) => free_into(a, bound, out),
        M::And(a, b) | M::Or(a, b) => {
            free_into(a, bound, out);
            free_into(b, bound, out);
        }
        M::Maj(v, items) => {
            let mut b = bound;
            b[v.index()] = true;
            for g in items {
                free_into(g, b, out);
            }
        }
        M::Exists(v, a) | M::Forall(v, a) => {
            let mut b = bound;
            b[v.index()] = true;
            free_into(a, b, out);
        }
    }
}

/// Nesting depth of majority quantifiers; `E` and `A` count as one.
pub fn depth_maj2(f: &Maj2Formula) -> usize {
    match f {
        M::Sym(..) | M::Less(..) | M::Bool(_) => 0,
        M::Not(a) => depth_maj2(a),
        M::And(a, b) | M::Or(a, b) => depth_maj2(a).max(depth_maj2(b)),
        M::Maj(_, items) => 1 + items.iter().map(depth_maj2).max().unwrap_or(0),
        M::Exists(_, a) | M::Forall(_, a) => 1 + depth_maj2(a),
    }
}

/// Symbols used by the formula, in first-seen order.
pub fn maj2_symbols(f: &Maj2Formula) -> Vec<char> {
    fn go(f: &Maj2Formula, out: &mut Vec<char>) {
        match f {
            M::Sym(c, _) => {
                if !out.contains(c) {
                    out.push(*c)
                }
            }
            M::Less(..) | M::Bool(_) => {}
            M::Not(a) | M::Exists(_, a) | M::Forall(_, a) => go(a, out),
            M::And(a, b) | M::Or(a, b) => {
                go(a, out);
                go(b, out);
            }
            M::Maj(_, items) => items.iter().for_each(|g| go(g, out)),
        }
    }
    let mut out = Vec::new();
    go(f, &mut out);
    out
}
