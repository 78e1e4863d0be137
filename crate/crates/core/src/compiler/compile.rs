use std::collections::{BTreeMap, HashMap};

use super::CompileError;
use crate::fixedpoint::Precision;
use crate::formula::{depth, print, Alphabet, CmpOp, Formula, FormulaKind, TermKind, BOS};
use crate::transformer::{Layer, LocalMap, Stage, Transformer};
use crate::transforms::{eliminate_count_sugar, eliminate_ite, linearize};

/// Boolean structure over symbols and comparison outcomes.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
enum B {
    Const(bool),
    Sym(usize),
    Not(Box<B>),
    And(Box<B>, Box<B>),
    Cmp(usize),
}

/// `Σ λ·#<[χ] ≥ c`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
struct Threshold {
    atoms: Vec<(B, i64)>,
    c: i64,
}

struct Plan {
    symbols: Vec<char>,
    thresholds: Vec<Threshold>,
    levels: Vec<usize>,
    index: HashMap<Threshold, usize>,
}

impl Plan {
    fn level(&self, b: &B) -> usize {
        match b {
            B::Const(_) | B::Sym(_) => 0,
            B::Not(a) => self.level(a),
            B::And(a, c) => self.level(a).max(self.level(c)),
            B::Cmp(k) => self.levels[*k],
        }
    }

    fn intern(&mut self, t: Threshold) -> usize {
        if let Some(&k) = self.index.get(&t) {
            return k;
        }
        let lvl = 1 + t.atoms.iter().map(|(b, _)| self.level(b)).max().unwrap_or(0);
        let k = self.thresholds.len();
        self.index.insert(t.clone(), k);
        self.thresholds.push(t);
        self.levels.push(lvl);
        k
    }

    fn formula(&mut self, f: &Formula) -> Result<B, CompileError> {
        Ok(match f.kind() {
            FormulaKind::Sym(c) => match self.symbols.iter().position(|s| s == c) {
                Some(k) => B::Sym(k),
                None => return Err(CompileError::Dialect(format!("symbol `{c}` is not in the alphabet"))),
            },
            FormulaKind::Bool(b) => B::Const(*b),
            FormulaKind::Not(a) => B::Not(Box::new(self.formula(a)?)),
            FormulaKind::And(a, b) => B::And(Box::new(self.formula(a)?), Box::new(self.formula(b)?)),
            FormulaKind::Or(a, b) => {
                let na = B::Not(Box::new(self.formula(a)?));
                let nb = B::Not(Box::new(self.formula(b)?));
                B::Not(Box::new(B::And(Box::new(na), Box::new(nb))))
            }
            FormulaKind::Compare(a, op, b) => {
                let lin = linearize(a)
                    .zip(linearize(b))
                    .map(|(x, y)| x.minus(&y))
                    .expect("?: was eliminated");
                let mut atoms = Vec::new();
                for (t, l) in &lin.atoms {
                    match t.kind() {
                        TermKind::CountLeft(chi) => {
                            let l = i64::try_from(*l).map_err(|_| CompileError::Precision("coefficient overflow".into()))?;
                            atoms.push((self.formula(chi)?, l));
                        }
                        _ => return Err(CompileError::Dialect("only #< counts can be compiled".into())),
                    }
                }
                let k = i64::try_from(lin.constant).map_err(|_| CompileError::Precision("constant overflow".into()))?;
                if atoms.is_empty() {
                    return Ok(B::Const(op.holds(k as i128, 0)));
                }
                let neg: Vec<(B, i64)> = atoms.iter().map(|(b, l)| (b.clone(), -l)).collect();
                // L + k op 0
                let ge = |s: &mut Self, atoms: Vec<(B, i64)>, c: i64| B::Cmp(s.intern(Threshold { atoms, c }));
                match op {
                    CmpOp::Ge => ge(self, atoms, -k),
                    CmpOp::Gt => ge(self, atoms, 1 - k),
                    CmpOp::Le => ge(self, neg, k),
                    CmpOp::Lt => ge(self, neg, k + 1),
                    CmpOp::Eq | CmpOp::Ne => {
                        let both = B::And(Box::new(ge(self, atoms, -k)), Box::new(ge(self, neg, k)));
                        if *op == CmpOp::Eq {
                            both
                        } else {
                            B::Not(Box::new(both))
                        }
                    }
                }
            }
            FormulaKind::Prev(_) | FormulaKind::Mod { .. } => {
                return Err(CompileError::Dialect("Y and MOD cannot be compiled".into()))
            }
        })
    }
}

/// Value of `b` at the BOS position if it is determined there: symbols are
/// false, comparison outcomes unknown.
fn at_bos(b: &B) -> Option<bool> {
    match b {
        B::Const(v) => Some(*v),
        B::Sym(_) => Some(false),
        B::Cmp(_) => None,
        B::Not(a) => at_bos(a).map(|v| !v),
        B::And(a, c) => match (at_bos(a), at_bos(c)) {
            (Some(false), _) | (_, Some(false)) => Some(false),
            (Some(true), Some(true)) => Some(true),
            _ => None,
        },
    }
}

/// An affine form over circuit wires, in units of 1.
#[derive(Debug, Clone, Default)]
struct Lin {
    terms: Vec<(usize, i64)>,
    c: i64,
}

impl Lin {
    fn wire(w: usize) -> Self {
        Lin { terms: vec![(w, 1)], c: 0 }
    }
    fn constant(c: i64) -> Self {
        Lin { terms: vec![], c }
    }
    fn add(mut self, other: &Lin, k: i64) -> Self {
        for &(w, x) in &other.terms {
            match self.terms.iter_mut().find(|(v, _)| *v == w) {
                Some((_, y)) => *y += k * x,
                None => self.terms.push((w, k * x)),
            }
        }
        self.c += k * other.c;
        self
    }
}

/// Builds a chain of Affine+ReLU stages. Every wire holds a nonnegative
/// value, so each stage copies the old wires unchanged through its ReLU.
struct Circuit {
    prec: Precision,
    width: usize,
    stages: Vec<Stage>,
    /// Pre-activation forms of the stage being assembled.
    pending: Vec<Lin>,
    memo: HashMap<B, Lin>,
    ind: Vec<Lin>,
    cmp_wire: HashMap<usize, usize>,
}

impl Circuit {
    /// Input: code in coordinate 0, comparison indicators in
    /// `cmp_coord`. The first stage forms the tents `relu(code - j)`.
    fn new(prec: Precision, d: usize, n_symbols: usize, cmp_coord: &HashMap<usize, usize>) -> Self {
        let mut c = Circuit {
            prec,
            width: d,
            stages: Vec::new(),
            pending: Vec::new(),
            memo: HashMap::new(),
            ind: Vec::new(),
            cmp_wire: cmp_coord.clone(),
        };
        // tents j = -1 ..= n+1 at wires d + (j+1)
        let mut tents = Vec::new();
        for j in -1..=(n_symbols as i64 + 1) {
            tents.push(c.new_wire(Lin { terms: vec![(0, 1)], c: -j }));
        }
        c.flush();
        let r = |j: i64| tents[(j + 1) as usize];
        for i in 0..=n_symbols as i64 {
            c.ind.push(Lin {
                terms: vec![(r(i - 1), 1), (r(i), -2), (r(i + 1), 1)],
                c: 0,
            });
        }
        c
    }

    fn new_wire(&mut self, form: Lin) -> usize {
        self.pending.push(form);
        self.width + self.pending.len() - 1
    }

    fn flush(&mut self) {
        if self.pending.is_empty() {
            return;
        }
        let s = self.prec.scale();
        let n_out = self.width + self.pending.len();
        let mut m = Vec::with_capacity(n_out);
        let mut b = Vec::with_capacity(n_out);
        for w in 0..self.width {
            let mut row = vec![0; self.width];
            row[w] = s;
            m.push(row);
            b.push(0);
        }
        for form in self.pending.drain(..) {
            let mut row = vec![0; self.width];
            for (w, k) in form.terms {
                row[w] += k * s;
            }
            m.push(row);
            b.push(form.c * s);
        }
        self.stages.push(Stage::Affine { m, b });
        self.stages.push(Stage::Relu);
        self.width = n_out;
    }

    /// Form that equals the 0/1 value of `b` once the current stage is
    /// flushed. And-gates need their inputs from an earlier stage.
    fn signal(&mut self, b: &B) -> Lin {
        if let Some(l) = self.memo.get(b) {
            return l.clone();
        }
        let out = match b {
            B::Const(v) => Lin::constant(*v as i64),
            B::Sym(k) => self.ind[k + 1].clone(),
            B::Cmp(k) => Lin::wire(self.cmp_wire[k]),
            B::Not(a) => Lin::constant(1).add(&self.signal(a), -1),
            B::And(a, c) => {
                let la = self.signal(a);
                let lc = self.signal(c);
                self.flush();
                let w = self.new_wire(la.add(&lc, 1).add(&Lin::constant(1), -1));
                self.flush();
                Lin::wire(w)
            }
        };
        self.memo.insert(b.clone(), out.clone());
        out
    }

    /// A wire holding the 0/1 value of `b`.
    fn materialize(&mut self, b: &B) -> usize {
        let l = self.signal(b);
        self.flush();
        let w = self.new_wire(l);
        self.flush();
        w
    }

    fn bos(&self) -> Lin {
        self.ind[0].clone()
    }

    /// Final affine stage: `rows[r] = Σ k·wire + c` (units of 1).
    fn finish(mut self, rows: Vec<Lin>) -> LocalMap {
        self.flush();
        let s = self.prec.scale();
        let mut m = Vec::new();
        let mut b = Vec::new();
        for form in rows {
            let mut row = vec![0; self.width];
            for (w, k) in form.terms {
                row[w] += k * s;
            }
            m.push(row);
            b.push(form.c * s);
        }
        self.stages.push(Stage::Affine { m, b });
        LocalMap(self.stages)
    }
}

/// Compile a past-only formula into a transformer with one layer per
/// nesting level.
///
/// Layout: coordinate 0 holds the symbol code (BOS = 0, the i-th symbol =
/// i), and each comparison `Σλ·#<[χ] ≥ C` owns one coordinate. Its layer
/// attends uniformly to values `Σλ·1[χ] - C·1[BOS]`, so the attention
/// output is `(Σλ·#<[χ] - C)/(i+1)` rounded down, whose sign decides the
/// comparison; the feed-forward map turns the sign into 0/1 in place.
pub fn compile(f: &Formula, alphabet: &Alphabet, prec: Precision) -> Result<Transformer, CompileError> {
    let p = prec;
    if p.s < 1 || 2 * p.s + 2 > p.p {
        return Err(CompileError::Precision(format!("{p} needs s >= 1 and 2s <= p-2")));
    }
    let g = eliminate_ite(&eliminate_count_sugar(f));
    let mut plan = Plan {
        symbols: alphabet.symbols().to_vec(),
        thresholds: Vec::new(),
        levels: Vec::new(),
        index: HashMap::new(),
    };
    // `eliminate_count_sugar` turns #>, # into right counts, which fail here.
    let top = plan.formula(&g)?;
    let n_layers = plan.level(&top);
    let want = depth(f);
    let n = plan.symbols.len() as i64;
    let max = p.max_sig();
    let scale = p.scale();
    let fits = |v: i64| v.checked_mul(scale).is_some_and(|x| x <= max && x >= p.min_sig());
    if !fits(n + 1) {
        return Err(CompileError::Precision(format!("{p} cannot hold symbol codes up to {}", n + 1)));
    }
    for t in &plan.thresholds {
        let total: i64 = t.atoms.iter().map(|(_, l)| l.abs()).sum::<i64>() + t.c.abs();
        if !fits(total) || total * scale + 1 > max {
            return Err(CompileError::Precision(format!(
                "{p} cannot hold a comparison with coefficient mass {total}"
            )));
        }
    }

    let d = 1 + plan.thresholds.len();
    let coord: HashMap<usize, usize> = (0..plan.thresholds.len()).map(|k| (k, k + 1)).collect();
    let mut layers = Vec::new();
    for lvl in 1..=n_layers {
        let mine: Vec<usize> = (0..plan.thresholds.len()).filter(|&k| plan.levels[k] == lvl).collect();
        // value map
        let mut circ = Circuit::new(p, d, plan.symbols.len(), &coord);
        let mut sums: HashMap<usize, Lin> = HashMap::new();
        for &k in &mine {
            let t = plan.thresholds[k].clone();
            let mut form = Lin::default().add(&circ.bos(), -t.c);
            for (chi, l) in &t.atoms {
                if *l == 0 {
                    continue;
                }
                let w = match at_bos(chi) {
                    Some(false) => circ.materialize(chi),
                    // relu(χ - 1[BOS]) masks the BOS position
                    _ => {
                        let la = circ.signal(chi);
                        let bos = circ.bos();
                        circ.flush();
                        let w = circ.new_wire(la.add(&bos, -1));
                        circ.flush();
                        w
                    }
                };
                form = form.add(&Lin::wire(w), *l);
            }
            sums.insert(k, form);
        }
        let rows: Vec<Lin> = (0..d)
            .map(|c| {
                mine.iter()
                    .find(|&&k| coord[&k] == c)
                    .map(|k| sums[k].clone())
                    .unwrap_or_default()
            })
            .collect();
        let wv = circ.finish(rows);

        // threshold: y1 = x + δ, y2 = x, ind = 2^s·(relu(y1) - relu(y2))
        let sq = scale * scale;
        let mut m1 = Vec::new();
        let mut b1 = Vec::new();
        for c in 0..d {
            let mut row = vec![0; d];
            row[c] = scale;
            m1.push(row);
            b1.push(0);
        }
        let mut extra = HashMap::new();
        for &k in &mine {
            let mut row = vec![0; d];
            row[coord[&k]] = scale;
            extra.insert(coord[&k], m1.len());
            m1.push(row);
            b1.push(1);
        }
        let w1 = m1.len();
        let mut m2 = Vec::new();
        let mut b2 = Vec::new();
        for c in 0..d {
            let mut row = vec![0; w1];
            match extra.get(&c) {
                Some(&y1) => {
                    row[y1] = sq;
                    row[c] = -sq;
                }
                None => row[c] = scale,
            }
            m2.push(row);
            b2.push(0);
        }
        let ff = LocalMap(vec![
            Stage::Affine { m: m1, b: b1 },
            Stage::Relu,
            Stage::Affine { m: m2, b: b2 },
        ]);
        layers.push(Layer {
            wq: LocalMap::constant(d, vec![0]),
            wk: LocalMap::constant(d, vec![0]),
            wv,
            f: ff,
        });
    }

    // comparisons that folded to constants leave levels empty
    while layers.len() < want {
        layers.push(Layer {
            wq: LocalMap::constant(d, vec![0]),
            wk: LocalMap::constant(d, vec![0]),
            wv: LocalMap::constant(d, vec![0; d]),
            f: LocalMap::identity(),
        });
    }

    // output: 2·1[φ] - 1
    let mut circ = Circuit::new(p, d, plan.symbols.len(), &coord);
    let w = circ.materialize(&top);
    let w_out = circ.finish(vec![Lin { terms: vec![(w, 2)], c: -1 }]);

    let mut embedding = BTreeMap::new();
    embedding.insert(BOS, vec![0; d]);
    for (i, &c) in plan.symbols.iter().enumerate() {
        let mut e = vec![0; d];
        e[0] = (i as i64 + 1) * scale;
        embedding.insert(c, e);
    }
    let layout: Vec<serde_json::Value> = plan
        .thresholds
        .iter()
        .enumerate()
        .map(|(k, t)| {
            serde_json::json!({
                "coordinate": coord[&k],
                "layer": plan.levels[k],
                "threshold": t.c,
                "coefficients": t.atoms.iter().map(|(_, l)| *l).collect::<Vec<_>>(),
            })
        })
        .collect();
    let t = Transformer {
        precision: p,
        alphabet: plan.symbols.clone(),
        bos: BOS,
        d,
        embedding,
        layers,
        w_out,
        pe: Default::default(),
        meta: Some(serde_json::json!({
            "source": print(f),
            "symbol_codes": plan.symbols.iter().collect::<String>(),
            "comparisons": layout,
        })),
    };
    t.validate()?;
    Ok(t)
}
