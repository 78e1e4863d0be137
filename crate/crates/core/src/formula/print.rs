use super::ast::{Formula, FormulaKind, Term, TermKind};

/// Canonical text. Parser-shaped trees re-parse to an equal tree; other
/// shapes print as an equivalent formula.
pub fn print(f: &Formula) -> String {
    let mut out = String::new();
    formula(f, 1, &mut out);
    out
}

pub fn print_term(t: &Term) -> String {
    let mut out = String::new();
    term(t, &mut out);
    out
}

/// Upper bound on the printed length, computed without building the
/// string. Shared nodes count once per occurrence.
pub fn printed_len(f: &Formula) -> u128 {
    let mut memo = std::collections::HashMap::new();
    len_f(f, &mut memo)
}

fn len_f(f: &Formula, memo: &mut std::collections::HashMap<usize, u128>) -> u128 {
    if let Some(&n) = memo.get(&f.id()) {
        return n;
    }
    let n = match f.kind() {
        FormulaKind::Sym(_) => 4,
        FormulaKind::Bool(_) => 5,
        FormulaKind::Mod { .. } => 12,
        FormulaKind::Not(a) | FormulaKind::Prev(a) => 4 + len_f(a, memo),
        FormulaKind::And(a, b) | FormulaKind::Or(a, b) => 6 + len_f(a, memo) + len_f(b, memo),
        FormulaKind::Compare(a, _, b) => 4 + len_t(a, memo) + len_t(b, memo),
    };
    memo.insert(f.id(), n);
    n
}

fn len_t(t: &Term, memo: &mut std::collections::HashMap<usize, u128>) -> u128 {
    if let Some(&n) = memo.get(&t.id()) {
        return n;
    }
    let n = match t.kind() {
        TermKind::CountLeft(a)
        | TermKind::CountRight(a)
        | TermKind::CountAll(a)
        | TermKind::CountLeftStrict(a)
        | TermKind::CountRightStrict(a) => 5 + len_f(a, memo),
        TermKind::Sum(a, b) => 14 + len_t(a, memo) + len_t(b, memo),
        TermKind::Neg(a) | TermKind::Scale(_, a) => 25 + len_t(a, memo),
        TermKind::Const(_) => 20,
        TermKind::Ite(c, a, b) => 22 + len_f(c, memo) + len_t(a, memo) + len_t(b, memo),
    };
    memo.insert(t.id(), n);
    n
}

// Precedence: 1 = or, 2 = and, 3 = unary.
fn formula(f: &Formula, ctx: u8, out: &mut String) {
    match f.kind() {
        FormulaKind::Sym(c) => {
            out.push_str("Q(");
            out.push(*c);
            out.push(')');
        }
        FormulaKind::Bool(true) => out.push_str("TRUE"),
        FormulaKind::Bool(false) => out.push_str("FALSE"),
        FormulaKind::Mod { m, r } => out.push_str(&format!("MOD({m},{r})")),
        FormulaKind::Prev(a) => {
            out.push_str("Y(");
            formula(a, 1, out);
            out.push(')');
        }
        FormulaKind::Not(a) => {
            out.push('!');
            match a.kind() {
                FormulaKind::Compare(..) => {
                    out.push('(');
                    formula(a, 1, out);
                    out.push(')');
                }
                _ => formula(a, 3, out),
            }
        }
        FormulaKind::Or(a, b) => binary(a, b, " || ", 1, ctx, out),
        FormulaKind::And(a, b) => binary(a, b, " && ", 2, ctx, out),
        FormulaKind::Compare(a, op, b) => {
            term(a, out);
            out.push(' ');
            out.push_str(op.as_str());
            out.push(' ');
            term(b, out);
        }
    }
}

fn binary(a: &Formula, b: &Formula, op: &str, level: u8, ctx: u8, out: &mut String) {
    let paren = ctx > level;
    if paren {
        out.push('(');
    }
    formula(a, level, out);
    out.push_str(op);
    formula(b, level + 1, out);
    if paren {
        out.push(')');
    }
}

fn term(t: &Term, out: &mut String) {
    match t.kind() {
        TermKind::Sum(a, b) => {
            term(a, out);
            match b.kind() {
                TermKind::Neg(inner) => {
                    out.push_str(" - ");
                    factor(inner, out);
                }
                _ => {
                    out.push_str(" + ");
                    factor(b, out);
                }
            }
        }
        TermKind::Neg(inner) => {
            out.push_str("-1 * ");
            factor(inner, out);
        }
        _ => factor(t, out),
    }
}

fn factor(t: &Term, out: &mut String) {
    match t.kind() {
        TermKind::Const(c) => out.push_str(&c.to_string()),
        TermKind::Scale(c, inner) => {
            out.push_str(&c.to_string());
            out.push_str(" * ");
            factor(inner, out);
        }
        TermKind::CountLeft(a) => count("#<[", a, out),
        TermKind::CountRight(a) => count("#>[", a, out),
        TermKind::CountAll(a) => count("#[", a, out),
        TermKind::CountLeftStrict(a) => count("#<o[", a, out),
        TermKind::CountRightStrict(a) => count("#o>[", a, out),
        TermKind::Ite(c, a, b) => {
            out.push('(');
            formula(c, 1, out);
            out.push_str(" ? ");
            term(a, out);
            out.push_str(" : ");
            term(b, out);
            out.push(')');
        }
        TermKind::Sum(..) | TermKind::Neg(..) => {
            out.push_str("(TRUE ? ");
            term(t, out);
            out.push_str(" : 0)");
        }
    }
}

fn count(open: &str, f: &Formula, out: &mut String) {
    out.push_str(open);
    formula(f, 1, out);
    out.push(']');
}
