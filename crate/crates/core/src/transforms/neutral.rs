use std::collections::HashMap;

use num_integer::Integer;

use super::{y_normal_form, TransformError};
use crate::formula::{moduli, prev_depth, Alphabet, Evaluator, Formula, FormulaKind, Term, TermKind};

/// Result of [`neutral_letter_reduce`]: `f(w) ⊨ φ` iff `w ⊨ reduced`, where
/// `f(w) = e^x w1 e^(x-1) w2 ... wn e^(x-1)`.
#[derive(Debug, Clone)]
pub struct NeutralReduction {
    pub padding: usize,
    pub reduced: Formula,
}

/// `e^x w1 e^(x-1) ... wn e^(x-1)`.
pub fn pad_word(w: &[char], e: char, x: usize) -> Vec<char> {
    let mut out = vec![e; x];
    for &c in w {
        out.push(c);
        out.extend(std::iter::repeat_n(e, x - 1));
    }
    out
}

/// Remove `Y`, `MOD` and the neutral letter `e` from a past-only formula.
///
/// Position `i` of `w` stands for the block `ix+1 ..= ix+x` of `f(w)`; row
/// `y` of that block is `w_i` when `y = 1` and `e` otherwise. `T_y` gives the
/// formula that holds at `i` iff φ holds at `ix+y`, and the answer is `T_x`.
pub fn neutral_letter_reduce(
    f: &Formula,
    e: char,
    alphabet: &Alphabet,
) -> Result<NeutralReduction, TransformError> {
    if !alphabet.contains(e) {
        return Err(TransformError::Alphabet(format!("neutral letter `{e}` is not in the alphabet")));
    }
    if alphabet.len() < 2 {
        return Err(TransformError::Alphabet("no symbols besides the neutral letter".into()));
    }
    let m = moduli(f).into_iter().fold(1usize, |acc, m| acc.lcm(&(m as usize)));
    let x = m * (prev_depth(f) + 1);
    let ynf = y_normal_form(f, alphabet)?;
    let prefix = vec![e; x];
    let mut ctx = Reduce {
        e,
        x,
        prefix: Evaluator::new(&prefix),
        fmemo: HashMap::new(),
        tmemo: HashMap::new(),
    };
    let reduced = ctx.formula(&ynf, x)?;
    Ok(NeutralReduction { padding: x, reduced })
}

struct Reduce<'w> {
    e: char,
    x: usize,
    prefix: Evaluator<'w>,
    fmemo: HashMap<(usize, usize), Formula>,
    tmemo: HashMap<(usize, usize), Term>,
}

impl Reduce<'_> {
    /// `Y^c` applied to an atom, seen from row `y`.
    fn shifted_atom(&self, atom: &Formula, c: usize, y: usize) -> Result<Formula, TransformError> {
        let row = y as i64 - c as i64;
        Ok(match atom.kind() {
            FormulaKind::Sym(s) if *s == self.e => Formula::truth(row != 1),
            FormulaKind::Sym(_) if row == 1 => atom.clone(),
            FormulaKind::Sym(_) => Formula::truth(false),
            FormulaKind::Mod { m, r } => Formula::truth(row.rem_euclid(*m as i64) == *r as i64),
            FormulaKind::Or(a, b) => Formula::or(self.shifted_atom(a, c, y)?, self.shifted_atom(b, c, y)?),
            FormulaKind::Prev(a) => self.shifted_atom(a, c + 1, y)?,
            _ => return Err(TransformError::Dialect("expected a Y-normal form".into())),
        })
    }

    fn formula(&mut self, f: &Formula, y: usize) -> Result<Formula, TransformError> {
        if let Some(r) = self.fmemo.get(&(f.id(), y)) {
            return Ok(r.clone());
        }
        let out = match f.kind() {
            FormulaKind::Sym(_) | FormulaKind::Mod { .. } => self.shifted_atom(f, 0, y)?,
            FormulaKind::Prev(a) => self.shifted_atom(a, 1, y)?,
            FormulaKind::Bool(_) => f.clone(),
            FormulaKind::Not(a) => Formula::not(self.formula(a, y)?),
            FormulaKind::And(a, b) => Formula::and(self.formula(a, y)?, self.formula(b, y)?),
            FormulaKind::Or(a, b) => Formula::or(self.formula(a, y)?, self.formula(b, y)?),
            FormulaKind::Compare(a, op, b) => Formula::cmp(self.term(a, y)?, *op, self.term(b, y)?),
        };
        self.fmemo.insert((f.id(), y), out.clone());
        Ok(out)
    }

    /// Counts split into the prefix `e^x`, the earlier blocks, and the rows
    /// `1..=y` (or `1..y` for a strict count) of the current block.
    fn count(&mut self, inner: &Formula, y: usize, strict: bool) -> Result<Term, TransformError> {
        let on_prefix = self.prefix.formula(inner)?;
        let k = on_prefix.iter().filter(|b| **b).count() as i64;
        let mut parts = vec![Term::constant(k)];
        let rows: Vec<Formula> = (1..=self.x)
            .map(|yy| self.formula(inner, yy))
            .collect::<Result<_, _>>()?;
        for r in &rows {
            parts.push(Term::count_left_strict(r.clone()));
        }
        let last = if strict { y - 1 } else { y };
        for r in rows.iter().take(last) {
            parts.push(match r.as_bool() {
                Some(b) => Term::constant(b as i64),
                None => Term::ite(r.clone(), Term::constant(1), Term::constant(0)),
            });
        }
        Ok(Term::sum_all(parts))
    }

    fn term(&mut self, t: &Term, y: usize) -> Result<Term, TransformError> {
        if let Some(r) = self.tmemo.get(&(t.id(), y)) {
            return Ok(r.clone());
        }
        let out = match t.kind() {
            TermKind::CountLeft(a) => self.count(a, y, false)?,
            TermKind::CountLeftStrict(a) => self.count(a, y, true)?,
            TermKind::CountRight(_) | TermKind::CountAll(_) | TermKind::CountRightStrict(_) => {
                return Err(TransformError::Dialect(
                    "the neutral-letter reduction needs a past-only formula".into(),
                ))
            }
            TermKind::Sum(a, b) => Term::sum(self.term(a, y)?, self.term(b, y)?),
            TermKind::Neg(a) => Term::neg(self.term(a, y)?),
            TermKind::Scale(c, a) => Term::scale(*c, self.term(a, y)?),
            TermKind::Const(_) => t.clone(),
            TermKind::Ite(g, a, b) => Term::ite(self.formula(g, y)?, self.term(a, y)?, self.term(b, y)?),
        };
        self.tmemo.insert((t.id(), y), out.clone());
        Ok(out)
    }
}
