use crate::formula::{Formula, Term, TermKind};

/// A term as `Σ λ·atom + constant`, where atoms are count terms.
#[derive(Debug, Clone, Default)]
pub struct Linear {
    pub atoms: Vec<(Term, i128)>,
    pub constant: i128,
}

impl Linear {
    pub fn add_atom(&mut self, atom: &Term, coeff: i128) {
        match self.atoms.iter_mut().find(|(a, _)| a == atom) {
            Some((_, c)) => *c += coeff,
            None => self.atoms.push((atom.clone(), coeff)),
        }
    }

    /// `self - other`.
    pub fn minus(mut self, other: &Linear) -> Linear {
        for (a, c) in &other.atoms {
            self.add_atom(a, -c);
        }
        self.constant -= other.constant;
        self
    }

    pub fn negate(mut self) -> Linear {
        for (_, c) in &mut self.atoms {
            *c = -*c;
        }
        self.constant = -self.constant;
        self
    }

    pub fn is_constant(&self) -> bool {
        self.atoms.is_empty()
    }
}

/// Linearize a term without `?:`. Returns `None` when an `Ite` occurs
/// outside a count.
pub fn linearize(t: &Term) -> Option<Linear> {
    let mut out = Linear::default();
    go(t, 1, &mut out)?;
    Some(out)
}

fn go(t: &Term, k: i128, out: &mut Linear) -> Option<()> {
    match t.kind() {
        TermKind::CountLeft(_)
        | TermKind::CountRight(_)
        | TermKind::CountAll(_)
        | TermKind::CountLeftStrict(_)
        | TermKind::CountRightStrict(_) => out.add_atom(t, k),
        TermKind::Sum(a, b) => {
            go(a, k, out)?;
            go(b, k, out)?;
        }
        TermKind::Neg(a) => go(a, -k, out)?,
        TermKind::Scale(c, a) => go(a, k * *c as i128, out)?,
        TermKind::Const(c) => out.constant += k * *c as i128,
        TermKind::Ite(..) => return None,
    }
    Some(())
}

/// Sum with unit coefficients only: λ·atom becomes λ copies of the atom.
pub fn unit_sum(atoms: &[(Term, i128)], constant: i128) -> Term {
    let mut parts = Vec::new();
    for (a, c) in atoms {
        for _ in 0..*c {
            parts.push(a.clone());
        }
    }
    if constant != 0 || parts.is_empty() {
        parts.push(Term::constant(constant as i64));
    }
    Term::sum_all(parts)
}

/// `P < N` with both sides using nonnegative unit coefficients, equivalent
/// to `lin < 0`. Atoms whose coefficient cancelled to zero are added to both
/// sides so the nesting depth is kept.
pub fn less_than_zero(lin: &Linear) -> Formula {
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for (a, c) in &lin.atoms {
        match c.signum() {
            1 => pos.push((a.clone(), *c)),
            -1 => neg.push((a.clone(), -*c)),
            _ => {
                pos.push((a.clone(), 1));
                neg.push((a.clone(), 1));
            }
        }
    }
    let (pc, nc) = if lin.constant >= 0 {
        (lin.constant, 0)
    } else {
        (0, -lin.constant)
    };
    Formula::cmp(
        unit_sum(&pos, pc),
        crate::formula::CmpOp::Lt,
        unit_sum(&neg, nc),
    )
}
