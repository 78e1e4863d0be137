use std::collections::HashMap;

use super::TransformError;
use crate::formula::{Alphabet, Formula, FormulaKind, Term, TermKind};

/// Push every `Y` inwards until it only wraps `Q(σ)`, `MOD(m,r)`, or the
/// boundary guard `Y^c(Q(σ1) || ... || Q(σn))`.
///
/// Negations and comparisons under `c` pending `Y`s get the guard conjoined,
/// since `Y^c χ` is false at positions `i ≤ c` whatever χ is.
pub fn y_normal_form(f: &Formula, alphabet: &Alphabet) -> Result<Formula, TransformError> {
    let mut ctx = Ynf {
        alphabet,
        fmemo: HashMap::new(),
        tmemo: HashMap::new(),
    };
    ctx.formula(f, 0)
}

struct Ynf<'a> {
    alphabet: &'a Alphabet,
    fmemo: HashMap<(usize, usize), Formula>,
    tmemo: HashMap<(usize, usize), Term>,
}

fn prevs(mut f: Formula, c: usize) -> Formula {
    for _ in 0..c {
        f = Formula::prev(f);
    }
    f
}

impl Ynf<'_> {
    fn guard(&self, c: usize) -> Formula {
        let any = Formula::or_all(self.alphabet.symbols().iter().map(|&s| Formula::sym(s)));
        prevs(any, c)
    }

    fn guarded(&self, c: usize, f: Formula) -> Formula {
        if c == 0 {
            f
        } else {
            Formula::and(self.guard(c), f)
        }
    }

    fn formula(&mut self, f: &Formula, c: usize) -> Result<Formula, TransformError> {
        if let Some(r) = self.fmemo.get(&(f.id(), c)) {
            return Ok(r.clone());
        }
        let out = match f.kind() {
            FormulaKind::Sym(_) | FormulaKind::Mod { .. } => prevs(f.clone(), c),
            FormulaKind::Bool(true) => {
                if c == 0 {
                    f.clone()
                } else {
                    self.guard(c)
                }
            }
            FormulaKind::Bool(false) => f.clone(),
            FormulaKind::Prev(a) => self.formula(a, c + 1)?,
            FormulaKind::Not(a) => {
                let inner = Formula::not(self.formula(a, c)?);
                self.guarded(c, inner)
            }
            FormulaKind::And(a, b) => Formula::and(self.formula(a, c)?, self.formula(b, c)?),
            FormulaKind::Or(a, b) => Formula::or(self.formula(a, c)?, self.formula(b, c)?),
            FormulaKind::Compare(a, op, b) => {
                let inner = Formula::cmp(self.term(a, c)?, *op, self.term(b, c)?);
                self.guarded(c, inner)
            }
        };
        self.fmemo.insert((f.id(), c), out.clone());
        Ok(out)
    }

    fn term(&mut self, t: &Term, c: usize) -> Result<Term, TransformError> {
        if let Some(r) = self.tmemo.get(&(t.id(), c)) {
            return Ok(r.clone());
        }
        let out = match t.kind() {
            TermKind::CountLeft(a) => Term::count_left(self.formula(a, c)?),
            TermKind::CountLeftStrict(a) => Term::count_left_strict(self.formula(a, c)?),
            TermKind::CountRight(_) | TermKind::CountAll(_) | TermKind::CountRightStrict(_) => {
                return Err(TransformError::Dialect(
                    "Y-normal form needs a past-only formula".into(),
                ))
            }
            TermKind::Sum(a, b) => Term::sum(self.term(a, c)?, self.term(b, c)?),
            TermKind::Neg(a) => Term::neg(self.term(a, c)?),
            TermKind::Scale(k, a) => Term::scale(*k, self.term(a, c)?),
            TermKind::Const(_) => t.clone(),
            TermKind::Ite(g, a, b) => Term::ite(self.formula(g, c)?, self.term(a, c)?, self.term(b, c)?),
        };
        self.tmemo.insert((t.id(), c), out.clone());
        Ok(out)
    }
}

/// Every `Y` chain ends in `Q(σ)`, `MOD(m,r)`, or a disjunction of `Q(σ)`s.
pub fn is_ynf(f: &Formula) -> bool {
    match f.kind() {
        FormulaKind::Sym(_) | FormulaKind::Bool(_) | FormulaKind::Mod { .. } => true,
        FormulaKind::Prev(a) => chain_ok(a),
        FormulaKind::Not(a) => is_ynf(a),
        FormulaKind::And(a, b) | FormulaKind::Or(a, b) => is_ynf(a) && is_ynf(b),
        FormulaKind::Compare(a, _, b) => term_ok(a) && term_ok(b),
    }
}

fn chain_ok(f: &Formula) -> bool {
    match f.kind() {
        FormulaKind::Prev(a) => chain_ok(a),
        FormulaKind::Sym(_) | FormulaKind::Mod { .. } => true,
        FormulaKind::Or(..) => sym_disjunction(f),
        _ => false,
    }
}

fn sym_disjunction(f: &Formula) -> bool {
    match f.kind() {
        FormulaKind::Sym(_) => true,
        FormulaKind::Or(a, b) => sym_disjunction(a) && sym_disjunction(b),
        _ => false,
    }
}

fn term_ok(t: &Term) -> bool {
    match t.kind() {
        TermKind::CountLeft(a)
        | TermKind::CountRight(a)
        | TermKind::CountAll(a)
        | TermKind::CountLeftStrict(a)
        | TermKind::CountRightStrict(a) => is_ynf(a),
        TermKind::Sum(a, b) => term_ok(a) && term_ok(b),
        TermKind::Neg(a) | TermKind::Scale(_, a) => term_ok(a),
        TermKind::Const(_) => true,
        TermKind::Ite(g, a, b) => is_ynf(g) && term_ok(a) && term_ok(b),
    }
}
