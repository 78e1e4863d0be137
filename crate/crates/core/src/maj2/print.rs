use super::Maj2Formula as M;

/// Canonical text; re-parses to an equal tree.
pub fn print_maj2(f: &M) -> String {
    let mut out = String::new();
    go(f, 1, &mut out);
    out
}

// Precedence: 1 = or, 2 = and, 3 = unary.
fn go(f: &M, ctx: u8, out: &mut String) {
    match f {
        M::Sym(c, v) => out.push_str(&format!("Q({c}; {v})")),
        M::Less(a, b) => {
            let paren = ctx > 2;
            if paren {
                out.push('(');
            }
            out.push_str(&format!("{a} < {b}"));
            if paren {
                out.push(')');
            }
        }
        M::Bool(true) => out.push_str("TRUE"),
        M::Bool(false) => out.push_str("FALSE"),
        M::Not(a) => {
            out.push('!');
            go(a, 3, out);
        }
        M::And(a, b) => binary(a, b, " && ", 2, ctx, out),
        M::Or(a, b) => binary(a, b, " || ", 1, ctx, out),
        M::Maj(v, items) => {
            out.push_str(&format!("MAJ{v}<"));
            for (k, g) in items.iter().enumerate() {
                if k > 0 {
                    out.push_str("; ");
                }
                go(g, 1, out);
            }
            out.push('>');
        }
        M::Exists(v, a) | M::Forall(v, a) => {
            out.push(if matches!(f, M::Exists(..)) { 'E' } else { 'A' });
            out.push_str(&format!("{v}["));
            go(a, 1, out);
            out.push(']');
        }
    }
}

fn binary(a: &M, b: &M, op: &str, level: u8, ctx: u8, out: &mut String) {
    let paren = ctx > level;
    if paren {
        out.push('(');
    }
    go(a, level, out);
    out.push_str(op);
    go(b, level + 1, out);
    if paren {
        out.push(')');
    }
}
