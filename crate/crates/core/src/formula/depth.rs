use std::collections::HashMap;

use super::ast::{Formula, FormulaKind, Term, TermKind};

/// Nesting depth of counting operators.
pub fn depth(f: &Formula) -> usize {
    Depth::default().formula(f)
}

pub fn depth_term(t: &Term) -> usize {
    Depth::default().term(t)
}

#[derive(Default)]
struct Depth {
    memo: HashMap<usize, usize>,
}

impl Depth {
    fn formula(&mut self, f: &Formula) -> usize {
        if let Some(&d) = self.memo.get(&f.id()) {
            return d;
        }
        let d = match f.kind() {
            FormulaKind::Sym(_) | FormulaKind::Bool(_) | FormulaKind::Mod { .. } => 0,
            FormulaKind::Not(a) | FormulaKind::Prev(a) => self.formula(a),
            FormulaKind::And(a, b) | FormulaKind::Or(a, b) => self.formula(a).max(self.formula(b)),
            FormulaKind::Compare(a, _, b) => self.term(a).max(self.term(b)),
        };
        self.memo.insert(f.id(), d);
        d
    }

    fn term(&mut self, t: &Term) -> usize {
        if let Some(&d) = self.memo.get(&t.id()) {
            return d;
        }
        let d = match t.kind() {
            TermKind::CountLeft(a)
            | TermKind::CountRight(a)
            | TermKind::CountAll(a)
            | TermKind::CountLeftStrict(a)
            | TermKind::CountRightStrict(a) => 1 + self.formula(a),
            TermKind::Sum(a, b) => self.term(a).max(self.term(b)),
            TermKind::Neg(a) | TermKind::Scale(_, a) => self.term(a),
            TermKind::Const(_) => 0,
            TermKind::Ite(c, a, b) => self.formula(c).max(self.term(a)).max(self.term(b)),
        };
        self.memo.insert(t.id(), d);
        d
    }
}
