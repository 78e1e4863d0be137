use std::collections::HashMap;

use super::linear::{less_than_zero, linearize};
use crate::formula::{CmpOp, Formula, FormulaKind, Term, TermKind};

/// Bottom-up rebuild over a formula DAG with per-node memoization.
pub(crate) struct Rewriter<F, T>
where
    F: FnMut(&Formula, Formula) -> Formula,
    T: FnMut(&Term, Term) -> Term,
{
    fmemo: HashMap<usize, Formula>,
    tmemo: HashMap<usize, Term>,
    on_formula: F,
    on_term: T,
}

impl<F, T> Rewriter<F, T>
where
    F: FnMut(&Formula, Formula) -> Formula,
    T: FnMut(&Term, Term) -> Term,
{
    /// `on_formula(original, rebuilt)` sees each node after its children
    /// were rewritten; likewise `on_term`.
    pub(crate) fn new(on_formula: F, on_term: T) -> Self {
        Rewriter {
            fmemo: HashMap::new(),
            tmemo: HashMap::new(),
            on_formula,
            on_term,
        }
    }

    pub(crate) fn formula(&mut self, f: &Formula) -> Formula {
        if let Some(r) = self.fmemo.get(&f.id()) {
            return r.clone();
        }
        let rebuilt = match f.kind() {
            FormulaKind::Sym(_) | FormulaKind::Bool(_) | FormulaKind::Mod { .. } => f.clone(),
            FormulaKind::Not(a) => Formula::not(self.formula(a)),
            FormulaKind::Prev(a) => Formula::prev(self.formula(a)),
            FormulaKind::And(a, b) => Formula::and(self.formula(a), self.formula(b)),
            FormulaKind::Or(a, b) => Formula::or(self.formula(a), self.formula(b)),
            FormulaKind::Compare(a, op, b) => Formula::cmp(self.term(a), *op, self.term(b)),
        };
        let out = (self.on_formula)(f, rebuilt);
        self.fmemo.insert(f.id(), out.clone());
        out
    }

    pub(crate) fn term(&mut self, t: &Term) -> Term {
        if let Some(r) = self.tmemo.get(&t.id()) {
            return r.clone();
        }
        let rebuilt = match t.kind() {
            TermKind::CountLeft(a) => Term::count_left(self.formula(a)),
            TermKind::CountRight(a) => Term::count_right(self.formula(a)),
            TermKind::CountAll(a) => Term::count_all(self.formula(a)),
            TermKind::CountLeftStrict(a) => Term::count_left_strict(self.formula(a)),
            TermKind::CountRightStrict(a) => Term::count_right_strict(self.formula(a)),
            TermKind::Sum(a, b) => Term::sum(self.term(a), self.term(b)),
            TermKind::Neg(a) => Term::neg(self.term(a)),
            TermKind::Scale(c, a) => Term::scale(*c, self.term(a)),
            TermKind::Const(_) => t.clone(),
            TermKind::Ite(c, a, b) => Term::ite(self.formula(c), self.term(a), self.term(b)),
        };
        let out = (self.on_term)(t, rebuilt);
        self.tmemo.insert(t.id(), out.clone());
        out
    }
}

fn indicator(f: Formula) -> Term {
    Term::ite(f, Term::constant(1), Term::constant(0))
}

/// Rewrite `#[φ]`, `#<o[φ]`, `#o>[φ]` into one-sided counts and `?:`.
pub fn eliminate_count_sugar(f: &Formula) -> Formula {
    Rewriter::new(
        |_, g| g,
        |_, t| match t.kind() {
            TermKind::CountAll(a) => Term::sub(
                Term::sum(Term::count_left(a.clone()), Term::count_right(a.clone())),
                indicator(a.clone()),
            ),
            TermKind::CountLeftStrict(a) => Term::sub(Term::count_left(a.clone()), indicator(a.clone())),
            TermKind::CountRightStrict(a) => Term::sub(Term::count_right(a.clone()), indicator(a.clone())),
            _ => t,
        },
    )
    .formula(f)
}

/// Only the strict left count: `#<o[φ]` becomes `#<[φ] - (φ ? 1 : 0)`.
pub fn eliminate_strict_left(f: &Formula) -> Formula {
    Rewriter::new(
        |_, g| g,
        |_, t| match t.kind() {
            TermKind::CountLeftStrict(a) => Term::sub(Term::count_left(a.clone()), indicator(a.clone())),
            _ => t,
        },
    )
    .formula(f)
}

/// Remove every `?:` by splitting the enclosing comparison on its
/// condition, innermost first:
/// `(ψ ? t1 : t2) + u ≥ C` becomes `(ψ && t1 + u ≥ C) || (!ψ && t2 + u ≥ C)`.
pub fn eliminate_ite(f: &Formula) -> Formula {
    Rewriter::new(
        |_, g| match g.kind() {
            FormulaKind::Compare(a, op, b) => split_compare(a, *op, b),
            _ => g,
        },
        |_, t| t,
    )
    .formula(f)
}

fn split_compare(a: &Term, op: CmpOp, b: &Term) -> Formula {
    let target = innermost_ite(a).or_else(|| innermost_ite(b));
    let Some(ite) = target else {
        return Formula::cmp(a.clone(), op, b.clone());
    };
    let TermKind::Ite(cond, t1, t2) = ite.kind() else {
        unreachable!()
    };
    let with = |r: &Term| {
        let a2 = substitute(a, &ite, r);
        let b2 = substitute(b, &ite, r);
        split_compare(&a2, op, &b2)
    };
    Formula::or(
        Formula::and(cond.clone(), with(t1)),
        Formula::and(Formula::not(cond.clone()), with(t2)),
    )
}

/// An `Ite` at term level whose branches hold no further term-level `Ite`.
fn innermost_ite(t: &Term) -> Option<Term> {
    match t.kind() {
        TermKind::Sum(a, b) => innermost_ite(a).or_else(|| innermost_ite(b)),
        TermKind::Neg(a) | TermKind::Scale(_, a) => innermost_ite(a),
        TermKind::Ite(_, a, b) => innermost_ite(a)
            .or_else(|| innermost_ite(b))
            .or_else(|| Some(t.clone())),
        _ => None,
    }
}

fn substitute(t: &Term, target: &Term, with: &Term) -> Term {
    if t.id() == target.id() {
        return with.clone();
    }
    match t.kind() {
        TermKind::Sum(a, b) => Term::sum(substitute(a, target, with), substitute(b, target, with)),
        TermKind::Neg(a) => Term::neg(substitute(a, target, with)),
        TermKind::Scale(c, a) => Term::scale(*c, substitute(a, target, with)),
        TermKind::Ite(c, a, b) => Term::ite(
            c.clone(),
            substitute(a, target, with),
            substitute(b, target, with),
        ),
        _ => t.clone(),
    }
}

/// Rewrite `<=, >, >=, =, !=` and `||` into `<`, `!`, `&&`. Terms are left
/// alone.
pub fn normalize_to_minimal_basis(f: &Formula) -> Formula {
    Rewriter::new(
        |_, g| match g.kind() {
            FormulaKind::Or(a, b) => Formula::not(Formula::and(Formula::not(a.clone()), Formula::not(b.clone()))),
            FormulaKind::Compare(a, op, b) => {
                let lt = |x: &Term, y: &Term| Formula::cmp(x.clone(), CmpOp::Lt, y.clone());
                match op {
                    CmpOp::Lt => g.clone(),
                    CmpOp::Le => Formula::not(lt(b, a)),
                    CmpOp::Gt => lt(b, a),
                    CmpOp::Ge => Formula::not(lt(a, b)),
                    CmpOp::Eq => Formula::and(Formula::not(lt(a, b)), Formula::not(lt(b, a))),
                    CmpOp::Ne => Formula::not(Formula::and(Formula::not(lt(a, b)), Formula::not(lt(b, a)))),
                }
            }
            _ => g,
        },
        |_, t| t,
    )
    .formula(f)
}

/// Full sugar removal: the result uses only symbols, `!`, `&&`, `<`, one-sided
/// counts, `+` and integer constants (plus `Y`/`MOD` if present).
pub fn desugar(f: &Formula) -> Formula {
    let g = eliminate_ite(&eliminate_count_sugar(f));
    let g = normalize_to_minimal_basis(&g);
    // Move every comparison into `P < N` with unit coefficients.
    Rewriter::new(
        |_, g| match g.kind() {
            FormulaKind::Compare(a, CmpOp::Lt, b) => {
                let la = linearize(a).expect("no ?: left");
                let lb = linearize(b).expect("no ?: left");
                less_than_zero(&la.minus(&lb))
            }
            FormulaKind::Bool(true) => Formula::cmp(Term::constant(0), CmpOp::Lt, Term::constant(1)),
            FormulaKind::Bool(false) => Formula::cmp(Term::constant(0), CmpOp::Lt, Term::constant(0)),
            _ => g,
        },
        |_, t| t,
    )
    .formula(&g)
}

/// True if the formula is in the output language of [`desugar`].
pub fn is_desugared(f: &Formula) -> bool {
    let mut ok = true;
    check(f, &mut ok);
    ok
}

fn check(f: &Formula, ok: &mut bool) {
    match f.kind() {
        FormulaKind::Sym(_) | FormulaKind::Mod { .. } => {}
        FormulaKind::Bool(_) | FormulaKind::Or(..) => *ok = false,
        FormulaKind::Not(a) | FormulaKind::Prev(a) => check(a, ok),
        FormulaKind::And(a, b) => {
            check(a, ok);
            check(b, ok);
        }
        FormulaKind::Compare(a, op, b) => {
            if *op != CmpOp::Lt {
                *ok = false;
            }
            check_term(a, ok);
            check_term(b, ok);
        }
    }
}

fn check_term(t: &Term, ok: &mut bool) {
    match t.kind() {
        TermKind::CountLeft(a) | TermKind::CountRight(a) => check(a, ok),
        TermKind::Sum(a, b) => {
            check_term(a, ok);
            check_term(b, ok);
        }
        TermKind::Const(_) => {}
        _ => *ok = false,
    }
}
