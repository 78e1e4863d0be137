use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

/// Comparison operator between two terms.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CmpOp {
    Lt,
    Le,
    Gt,
    Ge,
    Eq,
    Ne,
}

impl CmpOp {
    pub fn holds(self, a: i128, b: i128) -> bool {
        match self {
            CmpOp::Lt => a < b,
            CmpOp::Le => a <= b,
            CmpOp::Gt => a > b,
            CmpOp::Ge => a >= b,
            CmpOp::Eq => a == b,
            CmpOp::Ne => a != b,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            CmpOp::Lt => "<",
            CmpOp::Le => "<=",
            CmpOp::Gt => ">",
            CmpOp::Ge => ">=",
            CmpOp::Eq => "=",
            CmpOp::Ne => "!=",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum FormulaKind {
    Sym(char),
    Bool(bool),
    Not(Formula),
    And(Formula, Formula),
    Or(Formula, Formula),
    Compare(Term, CmpOp, Term),
    /// Y: the formula held at the previous position.
    Prev(Formula),
    /// True at position i iff i ≡ r (mod m).
    Mod { m: u32, r: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub enum TermKind {
    CountLeft(Formula),
    CountRight(Formula),
    CountAll(Formula),
    CountLeftStrict(Formula),
    CountRightStrict(Formula),
    Sum(Term, Term),
    Neg(Term),
    /// `c * t`, produced by the `int * factor` production.
    Scale(i64, Term),
    Const(i64),
    Ite(Formula, Term, Term),
}

/// Shared, immutable formula node. Cloning is cheap and preserves sharing.
#[derive(Clone)]
pub struct Formula(Arc<FormulaKind>);

/// Shared, immutable term node.
#[derive(Clone)]
pub struct Term(Arc<TermKind>);

impl Formula {
    pub fn new(kind: FormulaKind) -> Self {
        Formula(Arc::new(kind))
    }
    pub fn kind(&self) -> &FormulaKind {
        &self.0
    }
    /// Address of the shared node, used as a memo key.
    pub fn id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }
    pub fn ptr_eq(&self, other: &Formula) -> bool {
        Arc::ptr_eq(&self.0, &other.0)
    }

    pub fn sym(c: char) -> Self {
        Self::new(FormulaKind::Sym(c))
    }
    pub fn truth(b: bool) -> Self {
        Self::new(FormulaKind::Bool(b))
    }
    pub fn not(f: Formula) -> Self {
        Self::new(FormulaKind::Not(f))
    }
    pub fn and(a: Formula, b: Formula) -> Self {
        Self::new(FormulaKind::And(a, b))
    }
    pub fn or(a: Formula, b: Formula) -> Self {
        Self::new(FormulaKind::Or(a, b))
    }
    pub fn cmp(a: Term, op: CmpOp, b: Term) -> Self {
        Self::new(FormulaKind::Compare(a, op, b))
    }
    pub fn prev(f: Formula) -> Self {
        Self::new(FormulaKind::Prev(f))
    }
    pub fn modulo(m: u32, r: u32) -> Self {
        Self::new(FormulaKind::Mod { m, r })
    }

    /// Left-nested conjunction; `TRUE` when empty.
    pub fn and_all(items: impl IntoIterator<Item = Formula>) -> Self {
        items
            .into_iter()
            .reduce(Formula::and)
            .unwrap_or_else(|| Formula::truth(true))
    }
    /// Left-nested disjunction; `FALSE` when empty.
    pub fn or_all(items: impl IntoIterator<Item = Formula>) -> Self {
        items
            .into_iter()
            .reduce(Formula::or)
            .unwrap_or_else(|| Formula::truth(false))
    }

    pub fn as_bool(&self) -> Option<bool> {
        match self.kind() {
            FormulaKind::Bool(b) => Some(*b),
            _ => None,
        }
    }
}

impl Term {
    pub fn new(kind: TermKind) -> Self {
        Term(Arc::new(kind))
    }
    pub fn kind(&self) -> &TermKind {
        &self.0
    }
    pub fn id(&self) -> usize {
        Arc::as_ptr(&self.0) as usize
    }

    pub fn count_left(f: Formula) -> Self {
        Self::new(TermKind::CountLeft(f))
    }
    pub fn count_right(f: Formula) -> Self {
        Self::new(TermKind::CountRight(f))
    }
    pub fn count_all(f: Formula) -> Self {
        Self::new(TermKind::CountAll(f))
    }
    pub fn count_left_strict(f: Formula) -> Self {
        Self::new(TermKind::CountLeftStrict(f))
    }
    pub fn count_right_strict(f: Formula) -> Self {
        Self::new(TermKind::CountRightStrict(f))
    }
    pub fn sum(a: Term, b: Term) -> Self {
        Self::new(TermKind::Sum(a, b))
    }
    pub fn neg(t: Term) -> Self {
        Self::new(TermKind::Neg(t))
    }
    pub fn scale(c: i64, t: Term) -> Self {
        Self::new(TermKind::Scale(c, t))
    }
    pub fn constant(c: i64) -> Self {
        Self::new(TermKind::Const(c))
    }
    pub fn ite(f: Formula, a: Term, b: Term) -> Self {
        Self::new(TermKind::Ite(f, a, b))
    }
    /// `a - b` in the parser's shape.
    pub fn sub(a: Term, b: Term) -> Self {
        Self::sum(a, Self::neg(b))
    }
    /// Left-nested sum; `0` when empty.
    pub fn sum_all(items: impl IntoIterator<Item = Term>) -> Self {
        items
            .into_iter()
            .reduce(Term::sum)
            .unwrap_or_else(|| Term::constant(0))
    }
}

impl PartialEq for Formula {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}
impl Eq for Formula {}
impl Hash for Formula {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}
impl PartialEq for Term {
    fn eq(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.0, &other.0) || self.0 == other.0
    }
}
impl Eq for Term {}
impl Hash for Term {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.0.hash(state)
    }
}

impl fmt::Debug for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::print::print(self))
    }
}
impl fmt::Debug for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::print::print_term(self))
    }
}
impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::print::print(self))
    }
}
impl fmt::Display for Term {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", super::print::print_term(self))
    }
}

/// Which optional operators a formula uses.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct Features {
    /// `#>`, `#o>`, or `#[...]` (the last looks both ways).
    pub future: bool,
    pub prev: bool,
    pub modulo: bool,
    pub ite: bool,
    /// Strict or two-sided counts.
    pub count_sugar: bool,
}

/// Evaluation dialects.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Dialect {
    /// Only `#<`-style counts (with sugar that stays past-looking).
    Past,
    /// `#<` and `#>`.
    Bidirectional,
    /// `#<` with `Y` and `MOD`.
    PastPrevMod,
    Full,
}

impl Features {
    pub fn fits(&self, d: Dialect) -> bool {
        match d {
            Dialect::Past => !self.future && !self.prev && !self.modulo,
            Dialect::Bidirectional => !self.prev && !self.modulo,
            Dialect::PastPrevMod => !self.future,
            Dialect::Full => true,
        }
    }
}

/// Collect the feature set, visiting each shared node once.
pub fn features(f: &Formula) -> Features {
    let mut acc = Features::default();
    let mut seen = std::collections::HashSet::new();
    let mut stack_f = vec![f.clone()];
    let mut stack_t: Vec<Term> = Vec::new();
    while !stack_f.is_empty() || !stack_t.is_empty() {
        if let Some(f) = stack_f.pop() {
            if !seen.insert(f.id()) {
                continue;
            }
            match f.kind() {
                FormulaKind::Sym(_) | FormulaKind::Bool(_) => {}
                FormulaKind::Mod { .. } => acc.modulo = true,
                FormulaKind::Not(a) => stack_f.push(a.clone()),
                FormulaKind::Prev(a) => {
                    acc.prev = true;
                    stack_f.push(a.clone())
                }
                FormulaKind::And(a, b) | FormulaKind::Or(a, b) => {
                    stack_f.push(a.clone());
                    stack_f.push(b.clone());
                }
                FormulaKind::Compare(a, _, b) => {
                    stack_t.push(a.clone());
                    stack_t.push(b.clone());
                }
            }
        } else if let Some(t) = stack_t.pop() {
            if !seen.insert(t.id()) {
                continue;
            }
            match t.kind() {
                TermKind::CountLeft(a) => stack_f.push(a.clone()),
                TermKind::CountLeftStrict(a) => {
                    acc.count_sugar = true;
                    stack_f.push(a.clone())
                }
                TermKind::CountRight(a) => {
                    acc.future = true;
                    stack_f.push(a.clone())
                }
                TermKind::CountAll(a) | TermKind::CountRightStrict(a) => {
                    acc.future = true;
                    acc.count_sugar = true;
                    stack_f.push(a.clone())
                }
                TermKind::Sum(a, b) => {
                    stack_t.push(a.clone());
                    stack_t.push(b.clone());
                }
                TermKind::Neg(a) | TermKind::Scale(_, a) => stack_t.push(a.clone()),
                TermKind::Const(_) => {}
                TermKind::Ite(c, a, b) => {
                    acc.ite = true;
                    stack_f.push(c.clone());
                    stack_t.push(a.clone());
                    stack_t.push(b.clone());
                }
            }
        }
    }
    acc
}

/// Symbols mentioned by `Q(..)` atoms, in first-seen order.
pub fn symbols(f: &Formula) -> Vec<char> {
    let mut out = Vec::new();
    let mut seen = std::collections::HashSet::new();
    visit(f, &mut seen, &mut |k| {
        if let FormulaKind::Sym(c) = k {
            if !out.contains(c) {
                out.push(*c);
            }
        }
    });
    out
}

/// Moduli appearing in `MOD` atoms.
pub fn moduli(f: &Formula) -> Vec<u32> {
    let mut out = Vec::new();
    let mut seen = std::collections::HashSet::new();
    visit(f, &mut seen, &mut |k| {
        if let FormulaKind::Mod { m, .. } = k {
            out.push(*m);
        }
    });
    out
}

fn visit(
    f: &Formula,
    seen: &mut std::collections::HashSet<usize>,
    cb: &mut dyn FnMut(&FormulaKind),
) {
    if !seen.insert(f.id()) {
        return;
    }
    cb(f.kind());
    match f.kind() {
        FormulaKind::Not(a) | FormulaKind::Prev(a) => visit(a, seen, cb),
        FormulaKind::And(a, b) | FormulaKind::Or(a, b) => {
            visit(a, seen, cb);
            visit(b, seen, cb);
        }
        FormulaKind::Compare(a, _, b) => {
            visit_term(a, seen, cb);
            visit_term(b, seen, cb);
        }
        _ => {}
    }
}

fn visit_term(
    t: &Term,
    seen: &mut std::collections::HashSet<usize>,
    cb: &mut dyn FnMut(&FormulaKind),
) {
    if !seen.insert(t.id()) {
        return;
    }
    match t.kind() {
        TermKind::CountLeft(a)
        | TermKind::CountRight(a)
        | TermKind::CountAll(a)
        | TermKind::CountLeftStrict(a)
        | TermKind::CountRightStrict(a) => visit(a, seen, cb),
        TermKind::Sum(a, b) => {
            visit_term(a, seen, cb);
            visit_term(b, seen, cb);
        }
        TermKind::Neg(a) | TermKind::Scale(_, a) => visit_term(a, seen, cb),
        TermKind::Const(_) => {}
        TermKind::Ite(c, a, b) => {
            visit(c, seen, cb);
            visit_term(a, seen, cb);
            visit_term(b, seen, cb);
        }
    }
}

/// Maximum nesting of `Y` operators.
pub fn prev_depth(f: &Formula) -> usize {
    let mut memo = std::collections::HashMap::new();
    prev_depth_f(f, &mut memo)
}

fn prev_depth_f(f: &Formula, memo: &mut std::collections::HashMap<usize, usize>) -> usize {
    if let Some(&d) = memo.get(&f.id()) {
        return d;
    }
    let d = match f.kind() {
        FormulaKind::Sym(_) | FormulaKind::Bool(_) | FormulaKind::Mod { .. } => 0,
        FormulaKind::Not(a) => prev_depth_f(a, memo),
        FormulaKind::Prev(a) => 1 + prev_depth_f(a, memo),
        FormulaKind::And(a, b) | FormulaKind::Or(a, b) => {
            prev_depth_f(a, memo).max(prev_depth_f(b, memo))
        }
        FormulaKind::Compare(a, _, b) => prev_depth_t(a, memo).max(prev_depth_t(b, memo)),
    };
    memo.insert(f.id(), d);
    d
}

fn prev_depth_t(t: &Term, memo: &mut std::collections::HashMap<usize, usize>) -> usize {
    match t.kind() {
        TermKind::CountLeft(a)
        | TermKind::CountRight(a)
        | TermKind::CountAll(a)
        | TermKind::CountLeftStrict(a)
        | TermKind::CountRightStrict(a) => prev_depth_f(a, memo),
        TermKind::Sum(a, b) => prev_depth_t(a, memo).max(prev_depth_t(b, memo)),
        TermKind::Neg(a) | TermKind::Scale(_, a) => prev_depth_t(a, memo),
        TermKind::Const(_) => 0,
        TermKind::Ite(c, a, b) => prev_depth_f(c, memo)
            .max(prev_depth_t(a, memo))
            .max(prev_depth_t(b, memo)),
    }
}
