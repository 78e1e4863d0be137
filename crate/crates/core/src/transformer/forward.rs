use std::collections::HashMap;

use num_bigint::BigInt;
use num_rational::BigRational;

use super::pe::{alibi_window, PositionalEncoding, RotationTables};
use super::{LocalMap, ModelError, Transformer};
use crate::fixedpoint::{exp_round, Fixed, Precision};

/// Row-major significands, one row per position.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Matrix {
    pub cols: usize,
    pub data: Vec<i64>,
}

impl Matrix {
    fn with_cols(cols: usize, rows: usize) -> Self {
        Matrix {
            cols,
            data: Vec::with_capacity(cols * rows),
        }
    }
    pub fn rows(&self) -> usize {
        if self.cols == 0 {
            0
        } else {
            self.data.len() / self.cols
        }
    }
    /// Row for 0-based index `r`.
    pub fn row(&self, r: usize) -> &[i64] {
        &self.data[r * self.cols..(r + 1) * self.cols]
    }
    fn push(&mut self, row: &[i64]) {
        debug_assert_eq!(row.len(), self.cols);
        self.data.extend_from_slice(row);
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LayerActivations {
    pub q: Matrix,
    pub k: Matrix,
    pub v: Matrix,
    pub c: Matrix,
    /// Output of the layer, `f(c + h_prev)`.
    pub h: Matrix,
    /// `scores[i][j]` for j ≤ i (0-based), when recorded.
    pub scores: Option<Vec<Vec<i64>>>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Activations {
    pub h0: Matrix,
    pub layers: Vec<LayerActivations>,
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ForwardOptions {
    /// Keep the full score matrix of every layer (quadratic memory).
    pub record_scores: bool,
}

pub fn forward(t: &Transformer, w: &[char]) -> Result<(Activations, Fixed), ModelError> {
    forward_with(t, w, ForwardOptions::default())
}

pub fn accepts(t: &Transformer, w: &[char]) -> Result<bool, ModelError> {
    let (_, score) = forward(t, w)?;
    Ok(score.sig() > 0)
}

struct Memo<'a> {
    map: &'a LocalMap,
    prec: Precision,
    cache: HashMap<Vec<i64>, Vec<i64>>,
}

impl<'a> Memo<'a> {
    fn new(map: &'a LocalMap, prec: Precision) -> Self {
        Memo {
            map,
            prec,
            cache: HashMap::new(),
        }
    }
    fn apply(&mut self, x: &[i64]) -> Result<Vec<i64>, ModelError> {
        if let Some(v) = self.cache.get(x) {
            return Ok(v.clone());
        }
        let v = self.map.apply(x, self.prec)?;
        self.cache.insert(x.to_vec(), v.clone());
        Ok(v)
    }
}

pub fn forward_with(
    t: &Transformer,
    w: &[char],
    opts: ForwardOptions,
) -> Result<(Activations, Fixed), ModelError> {
    let prec = t.precision;
    if w.first() != Some(&t.bos) {
        return Err(ModelError::MissingBos(t.bos));
    }
    let n = w.len();
    let sinus = match &t.pe {
        PositionalEncoding::Sinusoidal { angles } => Some(RotationTables::new(angles, prec)),
        _ => None,
    };
    let mut h = Matrix::with_cols(t.d, n);
    for (idx, &c) in w.iter().enumerate() {
        if idx > 0 && c == t.bos {
            return Err(ModelError::ForeignSymbol(c));
        }
        let e = t.embedding.get(&c).ok_or(ModelError::ForeignSymbol(c))?;
        match &sinus {
            Some(tab) => {
                let off = tab.sinusoidal_offset(idx as u64 + 1);
                let row: Vec<i64> = e.iter().zip(&off).map(|(a, b)| prec.clamp(*a as i128 + *b as i128)).collect();
                h.push(&row);
            }
            None => h.push(e),
        }
    }
    let h0 = h.clone();
    let mut layers = Vec::with_capacity(t.layers.len());
    for layer in &t.layers {
        let (mut mq, mut mk, mut mv, mut mf) = (
            Memo::new(&layer.wq, prec),
            Memo::new(&layer.wk, prec),
            Memo::new(&layer.wv, prec),
            Memo::new(&layer.f, prec),
        );
        let dq = layer.wq.out_width(t.d)?;
        let mut q = Matrix::with_cols(dq, n);
        let mut k = Matrix::with_cols(dq, n);
        let mut v = Matrix::with_cols(t.d, n);
        for i in 0..n {
            q.push(&mq.apply(h.row(i))?);
            k.push(&mk.apply(h.row(i))?);
            v.push(&mv.apply(h.row(i))?);
        }
        let c = attend(t, &q, &k, &v)?;
        let scores = if opts.record_scores {
            Some(all_scores(t, &q, &k))
        } else {
            None
        };
        let mut out = Matrix::with_cols(t.d, n);
        for i in 0..n {
            let sum: Vec<i64> = c
                .row(i)
                .iter()
                .zip(h.row(i))
                .map(|(a, b)| prec.clamp(*a as i128 + *b as i128))
                .collect();
            out.push(&mf.apply(&sum)?);
        }
        h = out.clone();
        layers.push(LayerActivations {
            q,
            k,
            v,
            c,
            h: out,
            scores,
        });
    }
    let last = h.row(n - 1).to_vec();
    let y = t.w_out.apply(&last, prec)?;
    let score = Fixed::from_sig(y[0], prec).expect("maps return grid values");
    Ok((Activations { h0, layers }, score))
}

/// Score rule shared by every attention path.
struct Scorer<'a> {
    prec: Precision,
    rope: Option<RotationTables>,
    alibi: Option<i64>,
    q: &'a Matrix,
    k: &'a Matrix,
}

impl<'a> Scorer<'a> {
    fn new(t: &Transformer, q: &'a Matrix, k: &'a Matrix) -> Self {
        let prec = t.precision;
        let (rope, alibi) = match &t.pe {
            PositionalEncoding::Rope { angles } => (Some(RotationTables::new(angles, prec)), None),
            PositionalEncoding::Alibi { a } => (None, Some(*a)),
            _ => (None, None),
        };
        Scorer { prec, rope, alibi, q, k }
    }

    /// Query vector at 0-based position i, with the shift that maps a dot
    /// product to a significand.
    fn query(&self, i: usize) -> (Vec<i128>, u32) {
        match &self.rope {
            Some(r) => (r.rotate(self.q.row(i), i as u64 + 1), 3 * self.prec.s),
            None => (self.q.row(i).iter().map(|&x| x as i128).collect(), self.prec.s),
        }
    }

    fn key(&self, j: usize) -> Vec<i128> {
        match &self.rope {
            Some(r) => r.rotate(self.k.row(j), j as u64 + 1),
            None => self.k.row(j).iter().map(|&x| x as i128).collect(),
        }
    }

    fn score(&self, qv: &[i128], shift: u32, kv: &[i128], dist: usize) -> i64 {
        let mut acc: i128 = qv.iter().zip(kv).map(|(a, b)| a * b).sum();
        if let Some(a) = self.alibi {
            acc -= ((a as i128) << self.prec.s) * dist as i128;
        }
        self.prec.round_shifted(acc, shift)
    }
}

fn all_scores(t: &Transformer, q: &Matrix, k: &Matrix) -> Vec<Vec<i64>> {
    let sc = Scorer::new(t, q, k);
    let keys: Vec<Vec<i128>> = (0..k.rows()).map(|j| sc.key(j)).collect();
    (0..q.rows())
        .map(|i| {
            let (qv, shift) = sc.query(i);
            (0..=i).map(|j| sc.score(&qv, shift, &keys[j], i - j)).collect()
        })
        .collect()
}

fn weight(cache: &mut HashMap<i64, i64>, s: i64, prec: Precision) -> i64 {
    *cache
        .entry(s)
        .or_insert_with(|| exp_round(Fixed::sig_unchecked(s, prec), prec).sig())
}

fn attend(t: &Transformer, q: &Matrix, k: &Matrix, v: &Matrix) -> Result<Matrix, ModelError> {
    let prec = t.precision;
    let n = q.rows();
    let d = v.cols;
    let sc = Scorer::new(t, q, k);
    let mut exp_cache = HashMap::new();
    let mut out = Matrix::with_cols(d, n);
    let mut vsum = vec![0i128; d];
    let finish = |num: &[i128], den: i128, vsum: &[i128], count: usize| -> Vec<i64> {
        if den > 0 {
            num.iter().map(|&a| prec.clamp(a.div_euclid(den))).collect()
        } else {
            vsum.iter().map(|&a| prec.clamp(a.div_euclid(count as i128))).collect()
        }
    };

    if let Some(a) = sc.alibi.filter(|a| *a > 0) {
        // Weights vanish beyond the window; the bound is the largest exact
        // dot product that occurs.
        let keys: Vec<Vec<i128>> = (0..n).map(|j| sc.key(j)).collect();
        let mut qs: Vec<Vec<i128>> = (0..n).map(|i| sc.query(i).0).collect();
        qs.sort();
        qs.dedup();
        let mut ks = keys.clone();
        ks.sort();
        ks.dedup();
        let mut best: i128 = 0;
        for qv in &qs {
            for kv in &ks {
                best = best.max(qv.iter().zip(kv).map(|(x, y)| x * y).sum());
            }
        }
        let bound = BigRational::new(BigInt::from(best), BigInt::from(1i128 << (2 * prec.s)));
        let a_r = BigRational::new(BigInt::from(a), BigInt::from(1i64 << prec.s));
        let window = alibi_window(&a_r, &bound, prec) as usize;
        for i in 0..n {
            for (acc, &x) in vsum.iter_mut().zip(v.row(i)) {
                *acc += x as i128;
            }
            let (qv, shift) = sc.query(i);
            let mut num = vec![0i128; d];
            let mut den = 0i128;
            for j in i.saturating_sub(window - 1)..=i {
                let w = weight(&mut exp_cache, sc.score(&qv, shift, &keys[j], i - j), prec) as i128;
                if w != 0 {
                    den += w;
                    for (acc, &x) in num.iter_mut().zip(v.row(j)) {
                        *acc += w * x as i128;
                    }
                }
            }
            out.push(&finish(&num, den, &vsum, i + 1));
        }
        return Ok(out);
    }

    if sc.alibi.is_some() {
        // Non-positive slope: no window, plain quadratic sum.
        let keys: Vec<Vec<i128>> = (0..n).map(|j| sc.key(j)).collect();
        for i in 0..n {
            for (acc, &x) in vsum.iter_mut().zip(v.row(i)) {
                *acc += x as i128;
            }
            let (qv, shift) = sc.query(i);
            let mut num = vec![0i128; d];
            let mut den = 0i128;
            for j in 0..=i {
                let w = weight(&mut exp_cache, sc.score(&qv, shift, &keys[j], i - j), prec) as i128;
                den += w;
                for (acc, &x) in num.iter_mut().zip(v.row(j)) {
                    *acc += w * x as i128;
                }
            }
            out.push(&finish(&num, den, &vsum, i + 1));
        }
        return Ok(out);
    }

    // Scores depend only on (query, key) here, so positions sharing a
    // (key, value) pair are summed as one group with a multiplicity.
    let mut group_index: HashMap<(Vec<i128>, Vec<i64>), usize> = HashMap::new();
    let mut groups: Vec<(Vec<i128>, Vec<i64>, i128)> = Vec::new();
    let mut qcache: HashMap<Vec<i128>, Vec<i64>> = HashMap::new();
    for i in 0..n {
        let key = (sc.key(i), v.row(i).to_vec());
        match group_index.get(&key) {
            Some(&g) => groups[g].2 += 1,
            None => {
                group_index.insert(key.clone(), groups.len());
                groups.push((key.0, key.1, 1));
            }
        }
        for (acc, &x) in vsum.iter_mut().zip(v.row(i)) {
            *acc += x as i128;
        }
        let (qv, shift) = sc.query(i);
        let ws = qcache.entry(qv.clone()).or_default();
        while ws.len() < groups.len() {
            let g = &groups[ws.len()];
            ws.push(weight(&mut exp_cache, sc.score(&qv, shift, &g.0, 0), prec));
        }
        let mut num = vec![0i128; d];
        let mut den = 0i128;
        for (g, &w) in groups.iter().zip(ws.iter()) {
            if w == 0 {
                continue;
            }
            let wc = w as i128 * g.2;
            den += wc;
            for (acc, &x) in num.iter_mut().zip(&g.1) {
                *acc += wc * x as i128;
            }
        }
        out.push(&finish(&num, den, &vsum, i + 1));
    }
    Ok(out)
}
