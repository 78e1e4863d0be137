use std::collections::HashMap;
use std::rc::Rc;

use super::ast::{features, Dialect, Formula, FormulaKind, Term, TermKind};
use super::FormulaError;

/// Truth value of `f` at position `i` (1-based) of `w`.
pub fn eval_formula(f: &Formula, w: &[char], i: usize) -> Result<bool, FormulaError> {
    check_pos(w, i)?;
    Ok(Evaluator::new(w).formula(f)?[i - 1])
}

/// Value of `t` at position `i` (1-based) of `w`.
pub fn eval_term(t: &Term, w: &[char], i: usize) -> Result<i128, FormulaError> {
    check_pos(w, i)?;
    Ok(Evaluator::new(w).term(t)?[i - 1])
}

/// Evaluation at the final position.
pub fn accepts(f: &Formula, w: &[char]) -> Result<bool, FormulaError> {
    if w.is_empty() {
        return Err(FormulaError::EmptyWord);
    }
    eval_formula(f, w, w.len())
}

/// Truth values at every position, 1..=|w|.
pub fn eval_positions(f: &Formula, w: &[char]) -> Result<Vec<bool>, FormulaError> {
    if w.is_empty() {
        return Err(FormulaError::EmptyWord);
    }
    Ok(Evaluator::new(w).formula(f)?.to_vec())
}

/// Evaluate through the dialect-specific path: past-only formulas go through
/// the streaming evaluator, everything else through the table evaluator.
pub fn eval_dispatch(f: &Formula, w: &[char]) -> Result<Vec<bool>, FormulaError> {
    if features(f).fits(Dialect::Past) {
        PastEvaluator::new(f)?.run(w)
    } else {
        eval_positions(f, w)
    }
}

fn check_pos(w: &[char], i: usize) -> Result<(), FormulaError> {
    if w.is_empty() {
        return Err(FormulaError::EmptyWord);
    }
    if i == 0 || i > w.len() {
        return Err(FormulaError::PositionOutOfRange { i, n: w.len() });
    }
    Ok(())
}

/// Computes whole position vectors bottom-up, memoized per shared node.
pub struct Evaluator<'w> {
    word: &'w [char],
    fmemo: HashMap<usize, Rc<Vec<bool>>>,
    tmemo: HashMap<usize, Rc<Vec<i128>>>,
    // Keeps memo keys (node addresses) valid.
    roots: Vec<Formula>,
    troots: Vec<Term>,
}

impl<'w> Evaluator<'w> {
    pub fn new(word: &'w [char]) -> Self {
        Evaluator {
            word,
            fmemo: HashMap::new(),
            tmemo: HashMap::new(),
            roots: Vec::new(),
            troots: Vec::new(),
        }
    }

    pub fn formula(&mut self, f: &Formula) -> Result<Rc<Vec<bool>>, FormulaError> {
        self.roots.push(f.clone());
        self.f(f)
    }

    pub fn term(&mut self, t: &Term) -> Result<Rc<Vec<i128>>, FormulaError> {
        self.troots.push(t.clone());
        self.t(t)
    }

    fn f(&mut self, f: &Formula) -> Result<Rc<Vec<bool>>, FormulaError> {
        if let Some(v) = self.fmemo.get(&f.id()) {
            return Ok(v.clone());
        }
        let n = self.word.len();
        let v: Vec<bool> = match f.kind() {
            FormulaKind::Sym(c) => self.word.iter().map(|x| x == c).collect(),
            FormulaKind::Bool(b) => vec![*b; n],
            FormulaKind::Mod { m, r } => (1..=n).map(|i| i % *m as usize == *r as usize).collect(),
            FormulaKind::Not(a) => self.f(a)?.iter().map(|x| !x).collect(),
            FormulaKind::Prev(a) => {
                let a = self.f(a)?;
                (0..n).map(|i| i > 0 && a[i - 1]).collect()
            }
            FormulaKind::And(a, b) => {
                let a = self.f(a)?;
                let b = self.f(b)?;
                a.iter().zip(b.iter()).map(|(x, y)| *x && *y).collect()
            }
            FormulaKind::Or(a, b) => {
                let a = self.f(a)?;
                let b = self.f(b)?;
                a.iter().zip(b.iter()).map(|(x, y)| *x || *y).collect()
            }
            FormulaKind::Compare(a, op, b) => {
                let a = self.t(a)?;
                let b = self.t(b)?;
                a.iter().zip(b.iter()).map(|(x, y)| op.holds(*x, *y)).collect()
            }
        };
        let v = Rc::new(v);
        self.fmemo.insert(f.id(), v.clone());
        Ok(v)
    }

    fn t(&mut self, t: &Term) -> Result<Rc<Vec<i128>>, FormulaError> {
        if let Some(v) = self.tmemo.get(&t.id()) {
            return Ok(v.clone());
        }
        let n = self.word.len();
        let v: Vec<i128> = match t.kind() {
            TermKind::CountLeft(a) => prefix(&self.f(a)?, false),
            TermKind::CountLeftStrict(a) => prefix(&self.f(a)?, true),
            TermKind::CountRight(a) => suffix(&self.f(a)?, false),
            TermKind::CountRightStrict(a) => suffix(&self.f(a)?, true),
            TermKind::CountAll(a) => {
                let total = self.f(a)?.iter().filter(|x| **x).count() as i128;
                vec![total; n]
            }
            TermKind::Sum(a, b) => {
                let a = self.t(a)?;
                let b = self.t(b)?;
                a.iter()
                    .zip(b.iter())
                    .map(|(x, y)| x.checked_add(*y).ok_or(FormulaError::Overflow))
                    .collect::<Result<_, _>>()?
            }
            TermKind::Neg(a) => self.t(a)?.iter().map(|x| -x).collect(),
            TermKind::Scale(c, a) => self
                .t(a)?
                .iter()
                .map(|x| x.checked_mul(*c as i128).ok_or(FormulaError::Overflow))
                .collect::<Result<_, _>>()?,
            TermKind::Const(c) => vec![*c as i128; n],
            TermKind::Ite(c, a, b) => {
                let c = self.f(c)?;
                let a = self.t(a)?;
                let b = self.t(b)?;
                (0..n).map(|i| if c[i] { a[i] } else { b[i] }).collect()
            }
        };
        let v = Rc::new(v);
        self.tmemo.insert(t.id(), v.clone());
        Ok(v)
    }
}

fn prefix(v: &[bool], strict: bool) -> Vec<i128> {
    let mut acc = 0i128;
    v.iter()
        .map(|&x| {
            let before = acc;
            acc += x as i128;
            if strict {
                before
            } else {
                acc
            }
        })
        .collect()
}

fn suffix(v: &[bool], strict: bool) -> Vec<i128> {
    let mut out = vec![0; v.len()];
    let mut acc = 0i128;
    for i in (0..v.len()).rev() {
        let before = acc;
        acc += v[i] as i128;
        out[i] = if strict { before } else { acc };
    }
    out
}

#[derive(Debug, Clone)]
enum Op {
    Sym(char),
    Bool(bool),
    Not(usize),
    And(usize, usize),
    Or(usize, usize),
    Cmp(usize, super::ast::CmpOp, usize),
    Left(usize),
    LeftStrict(usize),
    Sum(usize, usize),
    Neg(usize),
    Scale(i64, usize),
    Const(i64),
    Ite(usize, usize, usize),
}

/// Left-to-right evaluator for the past-only dialect. Keeps one counter per
/// count node and touches every position once.
pub struct PastEvaluator {
    ops: Vec<Op>,
    root: usize,
}

impl PastEvaluator {
    pub fn new(f: &Formula) -> Result<Self, FormulaError> {
        let mut b = Builder {
            ops: Vec::new(),
            index: HashMap::new(),
        };
        let root = b.formula(f)?;
        Ok(PastEvaluator { ops: b.ops, root })
    }

    /// Truth values at positions 1..=|w|.
    pub fn run(&self, w: &[char]) -> Result<Vec<bool>, FormulaError> {
        if w.is_empty() {
            return Err(FormulaError::EmptyWord);
        }
        let mut val = vec![0i128; self.ops.len()];
        let mut state = vec![0i128; self.ops.len()];
        let mut out = Vec::with_capacity(w.len());
        for &c in w {
            for (k, op) in self.ops.iter().enumerate() {
                val[k] = match *op {
                    Op::Sym(s) => (s == c) as i128,
                    Op::Bool(b) => b as i128,
                    Op::Not(a) => (val[a] == 0) as i128,
                    Op::And(a, b) => (val[a] != 0 && val[b] != 0) as i128,
                    Op::Or(a, b) => (val[a] != 0 || val[b] != 0) as i128,
                    Op::Cmp(a, op, b) => op.holds(val[a], val[b]) as i128,
                    Op::Left(a) => {
                        state[k] += val[a];
                        state[k]
                    }
                    Op::LeftStrict(a) => {
                        let before = state[k];
                        state[k] += val[a];
                        before
                    }
                    Op::Sum(a, b) => val[a].checked_add(val[b]).ok_or(FormulaError::Overflow)?,
                    Op::Neg(a) => -val[a],
                    Op::Scale(s, a) => val[a]
                        .checked_mul(s as i128)
                        .ok_or(FormulaError::Overflow)?,
                    Op::Const(s) => s as i128,
                    Op::Ite(c, a, b) => {
                        if val[c] != 0 {
                            val[a]
                        } else {
                            val[b]
                        }
                    }
                };
            }
            out.push(val[self.root] != 0);
        }
        Ok(out)
    }
}

struct Builder {
    ops: Vec<Op>,
    index: HashMap<usize, usize>,
}

impl Builder {
    fn push(&mut self, id: usize, op: Op) -> usize {
        self.ops.push(op);
        let k = self.ops.len() - 1;
        self.index.insert(id, k);
        k
    }

    fn formula(&mut self, f: &Formula) -> Result<usize, FormulaError> {
        if let Some(&k) = self.index.get(&f.id()) {
            return Ok(k);
        }
        let op = match f.kind() {
            FormulaKind::Sym(c) => Op::Sym(*c),
            FormulaKind::Bool(b) => Op::Bool(*b),
            FormulaKind::Not(a) => Op::Not(self.formula(a)?),
            FormulaKind::And(a, b) => Op::And(self.formula(a)?, self.formula(b)?),
            FormulaKind::Or(a, b) => Op::Or(self.formula(a)?, self.formula(b)?),
            FormulaKind::Compare(a, op, b) => Op::Cmp(self.term(a)?, *op, self.term(b)?),
            FormulaKind::Prev(_) | FormulaKind::Mod { .. } => {
                return Err(FormulaError::Dialect("Y and MOD are outside the past-only dialect".into()))
            }
        };
        Ok(self.push(f.id(), op))
    }

    fn term(&mut self, t: &Term) -> Result<usize, FormulaError> {
        if let Some(&k) = self.index.get(&t.id()) {
            return Ok(k);
        }
        let op = match t.kind() {
            TermKind::CountLeft(a) => Op::Left(self.formula(a)?),
            TermKind::CountLeftStrict(a) => Op::LeftStrict(self.formula(a)?),
            TermKind::CountRight(_) | TermKind::CountRightStrict(_) | TermKind::CountAll(_) => {
                return Err(FormulaError::Dialect("future counts are outside the past-only dialect".into()))
            }
            TermKind::Sum(a, b) => Op::Sum(self.term(a)?, self.term(b)?),
            TermKind::Neg(a) => Op::Neg(self.term(a)?),
            TermKind::Scale(c, a) => Op::Scale(*c, self.term(a)?),
            TermKind::Const(c) => Op::Const(*c),
            TermKind::Ite(c, a, b) => Op::Ite(self.formula(c)?, self.term(a)?, self.term(b)?),
        };
        Ok(self.push(t.id(), op))
    }
}
