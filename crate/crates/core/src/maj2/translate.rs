use super::{Maj2Error, Maj2Formula as M, Var};
use crate::compiler::synth_table;
use crate::formula::{features, CmpOp, Formula, FormulaKind, Term, TermKind};
use crate::transforms::{eliminate_ite, linearize, Folder, Linear};

/// Majority formula with free variable x that holds at x = i iff `f`
/// holds at position i.
///
/// A comparison becomes `L > 0` for a linear form `L`; each unit of a
/// positive count contributes its body as one list entry, each unit of a
/// negative count contributes the negated body, and `TRUE`/`FALSE` entries
/// pad the list so the majority threshold lands on zero. Comparisons
/// without counts fold to constants.
pub fn tl_to_maj2(f: &Formula) -> Result<M, Maj2Error> {
    let fe = features(f);
    if fe.prev || fe.modulo {
        return Err(Maj2Error::Dialect("Y and MOD have no MAJ2 translation".into()));
    }
    to_maj(&eliminate_ite(f), Var::X)
}

fn to_maj(f: &Formula, v: Var) -> Result<M, Maj2Error> {
    Ok(match f.kind() {
        FormulaKind::Sym(c) => M::sym(*c, v),
        FormulaKind::Bool(b) => M::Bool(*b),
        FormulaKind::Not(a) => M::not(to_maj(a, v)?),
        FormulaKind::And(a, b) => M::and(to_maj(a, v)?, to_maj(b, v)?),
        FormulaKind::Or(a, b) => M::or(to_maj(a, v)?, to_maj(b, v)?),
        FormulaKind::Prev(_) | FormulaKind::Mod { .. } => {
            return Err(Maj2Error::Dialect("Y and MOD have no MAJ2 translation".into()))
        }
        FormulaKind::Compare(a, op, b) => {
            let lin = linearize(a)
                .zip(linearize(b))
                .map(|(x, y)| x.minus(&y))
                .ok_or_else(|| Maj2Error::Dialect("?: left in a comparison".into()))?;
            if lin.atoms.iter().all(|(_, c)| *c == 0) {
                return Ok(M::Bool(op.holds(lin.constant, 0)));
            }
            let plus = |mut l: Linear, k: i128| {
                l.constant += k;
                l
            };
            match op {
                CmpOp::Gt => positive(&lin, v)?,
                CmpOp::Ge => positive(&plus(lin, 1), v)?,
                CmpOp::Lt => positive(&lin.negate(), v)?,
                CmpOp::Le => positive(&plus(lin.negate(), 1), v)?,
                CmpOp::Eq | CmpOp::Ne => {
                    let both = M::and(
                        positive(&plus(lin.clone(), 1), v)?,
                        positive(&plus(lin.negate(), 1), v)?,
                    );
                    if *op == CmpOp::Eq {
                        both
                    } else {
                        M::not(both)
                    }
                }
            }
        }
    })
}

/// `L > 0` at x = v.
fn positive(lin: &Linear, v: Var) -> Result<M, Maj2Error> {
    let u = v.other();
    let mut pos = Vec::new();
    let mut neg = Vec::new();
    for (atom, c) in &lin.atoms {
        if *c == 0 {
            continue;
        }
        let body = count_body(atom, v)?;
        let list = if *c > 0 { &mut pos } else { &mut neg };
        for _ in 0..c.unsigned_abs() {
            list.push(body.clone());
        }
    }
    let unit = M::equal(u, v);
    let list = if lin.constant > 0 { &mut pos } else { &mut neg };
    for _ in 0..lin.constant.unsigned_abs() {
        list.push(unit.clone());
    }
    let (p, q) = (pos.len(), neg.len());
    let mut items = pos;
    items.extend(neg.into_iter().map(M::not));
    let pad = M::Bool(p > q);
    items.extend(std::iter::repeat(pad).take(p.abs_diff(q)));
    Ok(M::maj(u, items))
}

/// Formula in (v, u) whose u-count is the count term at v.
fn count_body(t: &Term, v: Var) -> Result<M, Maj2Error> {
    let u = v.other();
    let (inner, order) = match t.kind() {
        TermKind::CountLeft(a) => (a, Some(M::not(M::less(v, u)))),
        TermKind::CountRight(a) => (a, Some(M::not(M::less(u, v)))),
        TermKind::CountAll(a) => (a, None),
        TermKind::CountLeftStrict(a) => (a, Some(M::less(u, v))),
        TermKind::CountRightStrict(a) => (a, Some(M::less(v, u))),
        _ => return Err(Maj2Error::Dialect("unexpected term in a linear form".into())),
    };
    let body = to_maj(inner, u)?;
    Ok(match order {
        Some(o) => M::and(o, body),
        None => body,
    })
}

/// `Ex[!Ey[x < y] && f]`: closed, and true iff `f` holds with x at the
/// last position.
pub fn end_wrapper(f: &M) -> M {
    let last = M::not(M::exists(Var::Y, M::less(Var::X, Var::Y)));
    M::exists(Var::X, M::and(last, f.clone()))
}

/// Counting formula equivalent to `f` with its free variable (if any) at
/// the current position. Quantified bodies are expanded into mutually
/// exclusive cases over the order of the two variables and the truth of
/// every one-variable subformula.
pub fn maj2_to_tl(f: &M) -> Result<Formula, Maj2Error> {
    if f.free() == [true, true] {
        return Err(Maj2Error::TwoFreeVariables);
    }
    let mut fold = Folder::new();
    to_tl(&f.desugar(), &mut fold)
}

fn to_tl(f: &M, fold: &mut Folder) -> Result<Formula, Maj2Error> {
    Ok(match f {
        M::Sym(c, _) => Formula::sym(*c),
        M::Bool(b) => Formula::truth(*b),
        M::Less(a, b) if a == b => Formula::truth(false),
        M::Less(..) => return Err(Maj2Error::TwoFreeVariables),
        M::Not(a) => Formula::not(to_tl(a, fold)?),
        M::And(a, b) => Formula::and(to_tl(a, fold)?, to_tl(b, fold)?),
        M::Or(a, b) => Formula::or(to_tl(a, fold)?, to_tl(b, fold)?),
        M::Maj(u, items) => {
            let mut total = Vec::new();
            for item in items {
                total.push(count_of(item, *u, fold)?);
            }
            let sum = fold.sum_all(total);
            let n = Term::sub(
                Term::sum(
                    Term::count_left(Formula::truth(true)),
                    Term::count_right(Formula::truth(true)),
                ),
                Term::constant(1),
            );
            Formula::cmp(Term::scale(2, sum), CmpOp::Gt, Term::scale(items.len() as i64, n))
        }
        M::Exists(..) | M::Forall(..) => unreachable!("desugared"),
    })
}

/// Leaves of a quantifier body, split by which variable they read.
struct Leaves {
    /// Read only the outer variable (or nothing).
    outer: Vec<M>,
    /// Read only the bound variable.
    inner: Vec<M>,
}

#[derive(Clone, Copy, PartialEq, Eq)]
enum Order {
    Before,
    Same,
    After,
}

fn collect(f: &M, u: Var, leaves: &mut Leaves) -> Result<(), Maj2Error> {
    match f {
        M::Bool(_) | M::Less(..) => {}
        M::Not(a) => collect(a, u, leaves)?,
        M::And(a, b) | M::Or(a, b) => {
            collect(a, u, leaves)?;
            collect(b, u, leaves)?;
        }
        M::Sym(..) | M::Maj(..) | M::Exists(..) | M::Forall(..) => {
            let free = f.free();
            let side = match (free[u as usize], free[u.other() as usize]) {
                (true, true) => return Err(Maj2Error::TwoFreeVariables),
                (true, false) => &mut leaves.inner,
                _ => &mut leaves.outer,
            };
            if !side.contains(f) {
                side.push(f.clone());
            }
        }
    }
    Ok(())
}

/// Truth of the body for one choice of leaf values and order of u
/// relative to the outer variable.
fn skeleton(f: &M, u: Var, leaves: &Leaves, outer: &[bool], inner: &[bool], order: Order) -> bool {
    let rec = |g: &M| skeleton(g, u, leaves, outer, inner, order);
    match f {
        M::Bool(b) => *b,
        M::Less(a, b) if a == b => false,
        M::Less(a, _) => {
            if *a == u {
                order == Order::Before
            } else {
                order == Order::After
            }
        }
        M::Not(a) => !rec(a),
        M::And(a, b) => rec(a) && rec(b),
        M::Or(a, b) => rec(a) || rec(b),
        _ => match leaves.inner.iter().position(|g| g == f) {
            Some(k) => inner[k],
            None => outer[leaves.outer.iter().position(|g| g == f).expect("collected")],
        },
    }
}

/// `#{u : body}` as a term at the outer position.
fn count_of(body: &M, u: Var, fold: &mut Folder) -> Result<Term, Maj2Error> {
    let mut leaves = Leaves {
        outer: Vec::new(),
        inner: Vec::new(),
    };
    collect(body, u, &mut leaves)?;
    let outer_tl: Vec<Formula> = leaves.outer.iter().map(|g| to_tl(g, fold)).collect::<Result<_, _>>()?;
    let inner_tl: Vec<Formula> = leaves.inner.iter().map(|g| to_tl(g, fold)).collect::<Result<_, _>>()?;
    let mut fixed = Vec::new();
    Ok(shannon_outer(body, u, &leaves, &outer_tl, &inner_tl, &mut fixed, fold))
}

fn shannon_outer(
    body: &M,
    u: Var,
    leaves: &Leaves,
    outer_tl: &[Formula],
    inner_tl: &[Formula],
    fixed: &mut Vec<bool>,
    fold: &mut Folder,
) -> Term {
    let k = fixed.len();
    if k < outer_tl.len() {
        fixed.push(true);
        let yes = shannon_outer(body, u, leaves, outer_tl, inner_tl, fixed, fold);
        fixed.pop();
        fixed.push(false);
        let no = shannon_outer(body, u, leaves, outer_tl, inner_tl, fixed, fold);
        fixed.pop();
        return fold.ite(outer_tl[k].clone(), yes, no);
    }
    let t = inner_tl.len();
    let mut parts = Vec::new();
    for order in [Order::Before, Order::Same, Order::After] {
        let table: Vec<bool> = (0..(1usize << t))
            .map(|a| {
                let inner: Vec<bool> = (0..t).map(|b| (a >> b) & 1 == 1).collect();
                skeleton(body, u, leaves, fixed, &inner, order)
            })
            .collect();
        let g = synth_table(inner_tl, &table, fold);
        if g.as_bool() == Some(false) {
            continue;
        }
        let here = fold.ite(g.clone(), Term::constant(1), Term::constant(0));
        parts.push(match order {
            Order::Same => here,
            Order::Before => fold.sum(fold.count_left(g), Term::neg(here)),
            Order::After => fold.sum(Term::count_right(g), Term::neg(here)),
        });
    }
    fold.sum_all(parts)
}
