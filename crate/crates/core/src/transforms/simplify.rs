use std::collections::HashMap;

use crate::formula::{CmpOp, Formula, FormulaKind, Term, TermKind};

/// Constructors that fold constants as they build. Comparisons whose sides
/// have disjoint (or touching) value ranges fold to a constant too.
///
/// Folding can drop counts, so the depth may shrink.
#[derive(Default)]
pub struct Folder {
    ranges: HashMap<usize, (Option<i128>, Option<i128>)>,
    keep: Vec<Term>,
}

fn add_bound(a: Option<i128>, b: Option<i128>) -> Option<i128> {
    a?.checked_add(b?)
}

impl Folder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn not(&self, a: Formula) -> Formula {
        match a.kind() {
            FormulaKind::Bool(v) => Formula::truth(!v),
            FormulaKind::Not(x) => x.clone(),
            _ => Formula::not(a),
        }
    }

    pub fn and(&self, a: Formula, b: Formula) -> Formula {
        match (a.as_bool(), b.as_bool()) {
            (Some(false), _) | (_, Some(false)) => Formula::truth(false),
            (Some(true), _) => b,
            (_, Some(true)) => a,
            _ if a.ptr_eq(&b) => a,
            _ => Formula::and(a, b),
        }
    }

    pub fn or(&self, a: Formula, b: Formula) -> Formula {
        match (a.as_bool(), b.as_bool()) {
            (Some(true), _) | (_, Some(true)) => Formula::truth(true),
            (Some(false), _) => b,
            (_, Some(false)) => a,
            _ if a.ptr_eq(&b) => a,
            _ => Formula::or(a, b),
        }
    }

    /// `(c && a) || (!c && b)`.
    pub fn mux(&self, c: Formula, a: Formula, b: Formula) -> Formula {
        match c.as_bool() {
            Some(true) => a,
            Some(false) => b,
            None => {
                if a.ptr_eq(&b) {
                    return a;
                }
                match (a.as_bool(), b.as_bool()) {
                    (Some(true), Some(false)) => c,
                    (Some(false), Some(true)) => self.not(c),
                    _ => self.or(self.and(c.clone(), a), self.and(self.not(c), b)),
                }
            }
        }
    }

    pub fn count_left(&self, f: Formula) -> Term {
        match f.as_bool() {
            Some(false) => Term::constant(0),
            _ => Term::count_left(f),
        }
    }

    pub fn sum(&self, a: Term, b: Term) -> Term {
        match (const_of(&a), const_of(&b)) {
            (Some(x), Some(y)) => match x.checked_add(y) {
                Some(z) => Term::constant(z),
                None => Term::sum(a, b),
            },
            (Some(0), _) => b,
            (_, Some(0)) => a,
            _ => Term::sum(a, b),
        }
    }

    pub fn sum_all(&self, items: impl IntoIterator<Item = Term>) -> Term {
        items
            .into_iter()
            .reduce(|a, b| self.sum(a, b))
            .unwrap_or_else(|| Term::constant(0))
    }

    pub fn scale(&self, k: i64, t: Term) -> Term {
        if k == 1 {
            return t;
        }
        match const_of(&t) {
            Some(c) => match c.checked_mul(k) {
                Some(z) => Term::constant(z),
                None => Term::scale(k, t),
            },
            None if k == 0 => Term::constant(0),
            None => Term::scale(k, t),
        }
    }

    pub fn ite(&self, c: Formula, a: Term, b: Term) -> Term {
        match c.as_bool() {
            Some(true) => a,
            Some(false) => b,
            None if a.id() == b.id() => a,
            None => Term::ite(c, a, b),
        }
    }

    pub fn cmp(&mut self, a: Term, op: CmpOp, b: Term) -> Formula {
        let (alo, ahi) = self.range(&a);
        let (blo, bhi) = self.range(&b);
        // a - b ∈ [lo, hi]
        let lo = add_bound(alo, bhi.map(|x| -x));
        let hi = add_bound(ahi, blo.map(|x| -x));
        let decided = match op {
            CmpOp::Lt => decide(hi.map(|h| h < 0), lo.map(|l| l >= 0)),
            CmpOp::Le => decide(hi.map(|h| h <= 0), lo.map(|l| l > 0)),
            CmpOp::Gt => decide(lo.map(|l| l > 0), hi.map(|h| h <= 0)),
            CmpOp::Ge => decide(lo.map(|l| l >= 0), hi.map(|h| h < 0)),
            CmpOp::Eq => match (lo, hi) {
                (Some(0), Some(0)) => Some(true),
                _ if lo.is_some_and(|l| l > 0) || hi.is_some_and(|h| h < 0) => Some(false),
                _ => None,
            },
            CmpOp::Ne => match (lo, hi) {
                (Some(0), Some(0)) => Some(false),
                _ if lo.is_some_and(|l| l > 0) || hi.is_some_and(|h| h < 0) => Some(true),
                _ => None,
            },
        };
        match decided {
            Some(v) => Formula::truth(v),
            None => Formula::cmp(a, op, b),
        }
    }

    /// Value range over all words and positions (None = unbounded).
    pub fn range(&mut self, t: &Term) -> (Option<i128>, Option<i128>) {
        if let Some(r) = self.ranges.get(&t.id()) {
            return *r;
        }
        let r = match t.kind() {
            TermKind::Const(c) => (Some(*c as i128), Some(*c as i128)),
            TermKind::CountLeft(_)
            | TermKind::CountRight(_)
            | TermKind::CountAll(_)
            | TermKind::CountLeftStrict(_)
            | TermKind::CountRightStrict(_) => (Some(0), None),
            TermKind::Sum(a, b) => {
                let (alo, ahi) = self.range(a);
                let (blo, bhi) = self.range(b);
                (add_bound(alo, blo), add_bound(ahi, bhi))
            }
            TermKind::Neg(a) => {
                let (lo, hi) = self.range(a);
                (hi.map(|x| -x), lo.map(|x| -x))
            }
            TermKind::Scale(k, a) => {
                let (lo, hi) = self.range(a);
                let k = *k as i128;
                let m = |x: Option<i128>| x.and_then(|v| v.checked_mul(k));
                match k.signum() {
                    1 => (m(lo), m(hi)),
                    -1 => (m(hi), m(lo)),
                    _ => (Some(0), Some(0)),
                }
            }
            TermKind::Ite(_, a, b) => {
                let (alo, ahi) = self.range(a);
                let (blo, bhi) = self.range(b);
                (
                    alo.zip(blo).map(|(x, y)| x.min(y)),
                    ahi.zip(bhi).map(|(x, y)| x.max(y)),
                )
            }
        };
        self.ranges.insert(t.id(), r);
        // the id is only stable while the node is alive
        self.keep.push(t.clone());
        r
    }
}

fn decide(yes: Option<bool>, no: Option<bool>) -> Option<bool> {
    match (yes, no) {
        (Some(true), _) => Some(true),
        (_, Some(true)) => Some(false),
        _ => None,
    }
}

fn const_of(t: &Term) -> Option<i64> {
    match t.kind() {
        TermKind::Const(c) => Some(*c),
        _ => None,
    }
}

/// Rebuild with constant folding. May lower the depth.
pub fn simplify(f: &Formula) -> Formula {
    let mut fold = Folder::new();
    let mut fm: HashMap<usize, Formula> = HashMap::new();
    let mut tm: HashMap<usize, Term> = HashMap::new();
    simp_f(f, &mut fold, &mut fm, &mut tm)
}

fn simp_f(
    f: &Formula,
    fold: &mut Folder,
    fm: &mut HashMap<usize, Formula>,
    tm: &mut HashMap<usize, Term>,
) -> Formula {
    if let Some(r) = fm.get(&f.id()) {
        return r.clone();
    }
    let out = match f.kind() {
        FormulaKind::Sym(_) | FormulaKind::Bool(_) | FormulaKind::Mod { .. } => f.clone(),
        FormulaKind::Not(a) => {
            let a = simp_f(a, fold, fm, tm);
            fold.not(a)
        }
        FormulaKind::And(a, b) => {
            let a = simp_f(a, fold, fm, tm);
            let b = simp_f(b, fold, fm, tm);
            fold.and(a, b)
        }
        FormulaKind::Or(a, b) => {
            let a = simp_f(a, fold, fm, tm);
            let b = simp_f(b, fold, fm, tm);
            fold.or(a, b)
        }
        FormulaKind::Prev(a) => match simp_f(a, fold, fm, tm) {
            // Y(FALSE) is FALSE; Y(TRUE) is not constant
            g if g.as_bool() == Some(false) => g,
            g => Formula::prev(g),
        },
        FormulaKind::Compare(a, op, b) => {
            let a = simp_t(a, fold, fm, tm);
            let b = simp_t(b, fold, fm, tm);
            fold.cmp(a, *op, b)
        }
    };
    fm.insert(f.id(), out.clone());
    out
}

fn simp_t(
    t: &Term,
    fold: &mut Folder,
    fm: &mut HashMap<usize, Formula>,
    tm: &mut HashMap<usize, Term>,
) -> Term {
    if let Some(r) = tm.get(&t.id()) {
        return r.clone();
    }
    let out = match t.kind() {
        TermKind::CountLeft(a) => {
            let a = simp_f(a, fold, fm, tm);
            fold.count_left(a)
        }
        TermKind::CountRight(a) => match simp_f(a, fold, fm, tm) {
            g if g.as_bool() == Some(false) => Term::constant(0),
            g => Term::count_right(g),
        },
        TermKind::CountAll(a) => match simp_f(a, fold, fm, tm) {
            g if g.as_bool() == Some(false) => Term::constant(0),
            g => Term::count_all(g),
        },
        TermKind::CountLeftStrict(a) => match simp_f(a, fold, fm, tm) {
            g if g.as_bool() == Some(false) => Term::constant(0),
            g => Term::count_left_strict(g),
        },
        TermKind::CountRightStrict(a) => match simp_f(a, fold, fm, tm) {
            g if g.as_bool() == Some(false) => Term::constant(0),
            g => Term::count_right_strict(g),
        },
        TermKind::Sum(a, b) => {
            let a = simp_t(a, fold, fm, tm);
            let b = simp_t(b, fold, fm, tm);
            fold.sum(a, b)
        }
        TermKind::Neg(a) => {
            let a = simp_t(a, fold, fm, tm);
            match const_of(&a) {
                Some(c) => Term::constant(-c),
                None => Term::neg(a),
            }
        }
        TermKind::Scale(k, a) => {
            let a = simp_t(a, fold, fm, tm);
            fold.scale(*k, a)
        }
        TermKind::Const(_) => t.clone(),
        TermKind::Ite(c, a, b) => {
            let c = simp_f(c, fold, fm, tm);
            let a = simp_t(a, fold, fm, tm);
            let b = simp_t(b, fold, fm, tm);
            fold.ite(c, a, b)
        }
    };
    tm.insert(t.id(), out.clone());
    out
}
