use super::ast::{CmpOp, Formula, Term};
use super::{Alphabet, FormulaError};

/// Parse formula text over `alphabet`.
pub fn parse(text: &str, alphabet: &Alphabet) -> Result<Formula, FormulaError> {
    let mut p = Parser::new(text, Some(alphabet));
    let f = p.formula()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(f)
}

/// Parse without an alphabet check; every symbol is accepted.
pub fn parse_any(text: &str) -> Result<Formula, FormulaError> {
    let mut p = Parser::new(text, None);
    let f = p.formula()?;
    p.skip_ws();
    if !p.at_end() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(f)
}

pub(crate) struct Parser<'a> {
    chars: Vec<char>,
    pos: usize,
    alphabet: Option<&'a Alphabet>,
}

impl<'a> Parser<'a> {
    pub(crate) fn new(text: &str, alphabet: Option<&'a Alphabet>) -> Self {
        Parser {
            chars: text.chars().collect(),
            pos: 0,
            alphabet,
        }
    }

    pub(crate) fn at_end(&self) -> bool {
        self.pos >= self.chars.len()
    }

    pub(crate) fn error(&self, msg: impl Into<String>) -> FormulaError {
        let (mut line, mut col) = (1, 1);
        for &c in &self.chars[..self.pos.min(self.chars.len())] {
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
        }
        FormulaError::Syntax {
            line,
            col,
            msg: msg.into(),
        }
    }

    pub(crate) fn skip_ws(&mut self) {
        while self.pos < self.chars.len() && self.chars[self.pos].is_whitespace() {
            self.pos += 1;
        }
    }

    pub(crate) fn peek(&mut self) -> Option<char> {
        self.skip_ws();
        self.chars.get(self.pos).copied()
    }

    /// Consume `s` (after whitespace) if it is next.
    pub(crate) fn eat(&mut self, s: &str) -> bool {
        self.skip_ws();
        let n = s.chars().count();
        if self.pos + n <= self.chars.len() && self.chars[self.pos..self.pos + n].iter().copied().eq(s.chars()) {
            self.pos += n;
            true
        } else {
            false
        }
    }

    pub(crate) fn expect(&mut self, s: &str) -> Result<(), FormulaError> {
        if self.eat(s) {
            Ok(())
        } else {
            Err(self.error(format!("expected `{s}`")))
        }
    }

    /// Read one non-whitespace symbol character.
    pub(crate) fn symbol(&mut self) -> Result<char, FormulaError> {
        self.skip_ws();
        match self.chars.get(self.pos) {
            Some(&c) => {
                self.pos += 1;
                if let Some(a) = self.alphabet {
                    if !a.contains(c) {
                        self.pos -= 1;
                        return Err(FormulaError::UnknownSymbol(c));
                    }
                }
                Ok(c)
            }
            None => Err(self.error("expected a symbol")),
        }
    }

    fn starts_int(&mut self) -> bool {
        self.skip_ws();
        match self.chars.get(self.pos) {
            Some(c) if c.is_ascii_digit() => true,
            Some('-') => matches!(self.chars.get(self.pos + 1), Some(c) if c.is_ascii_digit()),
            _ => false,
        }
    }

    pub(crate) fn int(&mut self) -> Result<i64, FormulaError> {
        self.skip_ws();
        let start = self.pos;
        if self.chars.get(self.pos) == Some(&'-') {
            self.pos += 1;
        }
        while matches!(self.chars.get(self.pos), Some(c) if c.is_ascii_digit()) {
            self.pos += 1;
        }
        let s: String = self.chars[start..self.pos].iter().collect();
        s.parse::<i64>().map_err(|_| {
            self.pos = start;
            self.error("expected an integer")
        })
    }

    pub(crate) fn formula(&mut self) -> Result<Formula, FormulaError> {
        let mut acc = self.conj()?;
        while self.eat("||") {
            let rhs = self.conj()?;
            acc = Formula::or(acc, rhs);
        }
        Ok(acc)
    }

    fn conj(&mut self) -> Result<Formula, FormulaError> {
        let mut acc = self.unary()?;
        while self.eat("&&") {
            let rhs = self.unary()?;
            acc = Formula::and(acc, rhs);
        }
        Ok(acc)
    }

    fn unary(&mut self) -> Result<Formula, FormulaError> {
        // `!=` never starts a formula, so a bare `!` is negation.
        if self.peek() == Some('!') {
            self.pos += 1;
            return Ok(Formula::not(self.unary()?));
        }
        if self.eat("Y(") {
            let f = self.formula()?;
            self.expect(")")?;
            return Ok(Formula::prev(f));
        }
        if self.eat("MOD(") {
            let m = self.int()?;
            self.expect(",")?;
            let r = self.int()?;
            self.expect(")")?;
            if m < 1 || r < 0 || r >= m || m > u32::MAX as i64 {
                return Err(FormulaError::BadModulus { m, r });
            }
            return Ok(Formula::modulo(m as u32, r as u32));
        }
        if self.eat("Q(") {
            let c = self.symbol()?;
            self.expect(")")?;
            return Ok(Formula::sym(c));
        }
        if self.eat("TRUE") {
            return Ok(Formula::truth(true));
        }
        if self.eat("FALSE") {
            return Ok(Formula::truth(false));
        }
        if self.peek() == Some('(') {
            self.pos += 1;
            let inner = self.formula()?;
            if self.eat(")") {
                return Ok(inner);
            }
            if self.eat("?") {
                let first = self.ite_tail(inner)?;
                let lhs = self.term_tail(first)?;
                return self.compare_tail(lhs);
            }
            return Err(self.error("expected `)` or `?`"));
        }
        let lhs = self.term()?;
        self.compare_tail(lhs)
    }

    fn ite_tail(&mut self, cond: Formula) -> Result<Term, FormulaError> {
        let a = self.term()?;
        self.expect(":")?;
        let b = self.term()?;
        self.expect(")")?;
        Ok(Term::ite(cond, a, b))
    }

    fn compare_tail(&mut self, lhs: Term) -> Result<Formula, FormulaError> {
        let op = if self.eat("<=") {
            CmpOp::Le
        } else if self.eat(">=") {
            CmpOp::Ge
        } else if self.eat("!=") {
            CmpOp::Ne
        } else if self.eat("<") {
            CmpOp::Lt
        } else if self.eat(">") {
            CmpOp::Gt
        } else if self.eat("=") {
            CmpOp::Eq
        } else {
            return Err(self.error("expected a comparison operator"));
        };
        let rhs = self.term()?;
        Ok(Formula::cmp(lhs, op, rhs))
    }

    fn term(&mut self) -> Result<Term, FormulaError> {
        let first = self.factor()?;
        self.term_tail(first)
    }

    fn term_tail(&mut self, mut acc: Term) -> Result<Term, FormulaError> {
        loop {
            if self.eat("+") {
                let f = self.factor()?;
                acc = Term::sum(acc, f);
            } else if self.peek() == Some('-') {
                self.pos += 1;
                let f = self.factor()?;
                acc = Term::sum(acc, Term::neg(f));
            } else {
                return Ok(acc);
            }
        }
    }

    fn factor(&mut self) -> Result<Term, FormulaError> {
        if self.starts_int() {
            let c = self.int()?;
            if self.eat("*") {
                let f = self.factor()?;
                return Ok(Term::scale(c, f));
            }
            return Ok(Term::constant(c));
        }
        if self.eat("#<o[") {
            return Ok(Term::count_left_strict(self.bracketed()?));
        }
        if self.eat("#o>[") {
            return Ok(Term::count_right_strict(self.bracketed()?));
        }
        if self.eat("#<[") {
            return Ok(Term::count_left(self.bracketed()?));
        }
        if self.eat("#>[") {
            return Ok(Term::count_right(self.bracketed()?));
        }
        if self.eat("#[") {
            return Ok(Term::count_all(self.bracketed()?));
        }
        if self.eat("(") {
            let cond = self.formula()?;
            self.expect("?")?;
            return self.ite_tail(cond);
        }
        Err(self.error("expected a term"))
    }

    fn bracketed(&mut self) -> Result<Formula, FormulaError> {
        let f = self.formula()?;
        self.expect("]")?;
        Ok(f)
    }
}
