use super::{Maj2Error, Maj2Formula as M, Var};
use crate::formula::{Alphabet, FormulaError, Parser};

fn lift(e: FormulaError) -> Maj2Error {
    match e {
        FormulaError::Syntax { line, col, msg } => Maj2Error::Syntax { line, col, msg },
        FormulaError::UnknownSymbol(c) => Maj2Error::UnknownSymbol(c),
        other => Maj2Error::Formula(other),
    }
}

/// Parse MAJ₂ text over `alphabet`.
pub fn parse_maj2(text: &str, alphabet: &Alphabet) -> Result<M, Maj2Error> {
    run(Parser::new(text, Some(alphabet)))
}

pub fn parse_maj2_any(text: &str) -> Result<M, Maj2Error> {
    run(Parser::new(text, None))
}

fn run(mut p: Parser<'_>) -> Result<M, Maj2Error> {
    let f = or(&mut p).map_err(lift)?;
    p.skip_ws();
    if !p.at_end() {
        return Err(lift(p.error("unexpected trailing input")));
    }
    Ok(f)
}

type R<T> = Result<T, FormulaError>;

fn or(p: &mut Parser<'_>) -> R<M> {
    let mut f = and(p)?;
    while p.eat("||") {
        f = M::or(f, and(p)?);
    }
    Ok(f)
}

fn and(p: &mut Parser<'_>) -> R<M> {
    let mut f = unary(p)?;
    while p.eat("&&") {
        f = M::and(f, unary(p)?);
    }
    Ok(f)
}

fn var(p: &mut Parser<'_>) -> R<Var> {
    if p.eat("x") {
        Ok(Var::X)
    } else if p.eat("y") {
        Ok(Var::Y)
    } else {
        Err(p.error("expected a variable `x` or `y`"))
    }
}

fn unary(p: &mut Parser<'_>) -> R<M> {
    if p.eat("!") {
        return Ok(M::not(unary(p)?));
    }
    if p.eat("TRUE") {
        return Ok(M::Bool(true));
    }
    if p.eat("FALSE") {
        return Ok(M::Bool(false));
    }
    if p.eat("Q(") {
        let c = p.symbol()?;
        p.expect(";")?;
        let v = var(p)?;
        p.expect(")")?;
        return Ok(M::sym(c, v));
    }
    if p.eat("MAJ") {
        let v = var(p)?;
        p.expect("<")?;
        let mut items = vec![or(p)?];
        while p.eat(";") {
            items.push(or(p)?);
        }
        p.expect(">")?;
        return Ok(M::maj(v, items));
    }
    for (kw, all) in [("E", false), ("A", true)] {
        if p.eat(kw) {
            let v = var(p)?;
            p.expect("[")?;
            let f = or(p)?;
            p.expect("]")?;
            return Ok(if all { M::forall(v, f) } else { M::exists(v, f) });
        }
    }
    if p.eat("(") {
        let f = or(p)?;
        p.expect(")")?;
        return Ok(f);
    }
    let a = var(p)?;
    p.expect("<")?;
    let b = var(p)?;
    Ok(M::less(a, b))
}
