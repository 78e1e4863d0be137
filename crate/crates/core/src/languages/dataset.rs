use std::io::{BufRead, Write};

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use super::{altplus_dfa, LangError};
use crate::formula::BOS;

/// One training example. `source` starts with BOS; `target[i]` is `1` iff the
/// prefix of `source` after BOS ending at i is in `L_k` (`0` at BOS).
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetRecord {
    pub k: usize,
    pub source: String,
    pub target: String,
}

/// Prefix labels of `w` (without BOS) for `L_k`.
pub fn prediction_labels(k: usize, w: &[char]) -> Result<Vec<bool>, LangError> {
    let d = altplus_dfa(k, false);
    d.run(w).ok_or_else(|| {
        let c = w.iter().copied().find(|c| !d.alphabet.contains(c)).unwrap();
        LangError::ForeignSymbol(c)
    })
}

/// Words of `L_k` with length uniform in `lo..=hi` and the `k-1` block
/// switches a uniform subset of the `n-1` gaps.
pub fn sample_dataset(
    k: usize,
    lo: usize,
    hi: usize,
    count: usize,
    seed: u64,
) -> Result<Vec<DatasetRecord>, LangError> {
    if k == 0 {
        return Err(LangError::BadParameter("k must be at least 1".into()));
    }
    if lo < k || lo > hi {
        return Err(LangError::Infeasible(format!(
            "bin [{lo},{hi}] cannot hold {k} nonempty blocks"
        )));
    }
    if count == 0 {
        return Err(LangError::BadParameter("count must be at least 1".into()));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut out = Vec::with_capacity(count);
    for _ in 0..count {
        let n = rng.gen_range(lo..=hi);
        let w = sample_word(&mut rng, k, n);
        let labels = prediction_labels(k, &w)?;
        let mut source = String::with_capacity(n + 1);
        source.push(BOS);
        source.extend(w.iter());
        let mut target = String::with_capacity(n + 1);
        target.push('0');
        target.extend(labels.iter().map(|b| if *b { '1' } else { '0' }));
        out.push(DatasetRecord { k, source, target });
    }
    Ok(out)
}

/// A word of length n in `L_k` with uniformly chosen switch gaps.
pub(crate) fn sample_word<R: Rng>(rng: &mut R, k: usize, n: usize) -> Vec<char> {
    // gap g (0-based) sits between positions g and g+1
    let mut switch = vec![false; n.saturating_sub(1)];
    for g in sample(rng, n - 1, k - 1).into_iter() {
        switch[g] = true;
    }
    let mut w = Vec::with_capacity(n);
    let mut cur = 'a';
    for i in 0..n {
        if i > 0 && switch[i - 1] {
            cur = if cur == 'a' { 'b' } else { 'a' };
        }
        w.push(cur);
    }
    w
}

pub fn write_jsonl<W: Write>(records: &[DatasetRecord], mut out: W) -> Result<(), LangError> {
    for r in records {
        let line = serde_json::to_string(r).expect("records serialize");
        writeln!(out, "{line}")?;
    }
    Ok(())
}

pub fn read_jsonl<R: BufRead>(input: R) -> Result<Vec<DatasetRecord>, LangError> {
    let mut out = Vec::new();
    for (i, line) in input.lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let r: DatasetRecord = serde_json::from_str(&line).map_err(|e| LangError::Record {
            line: i + 1,
            msg: e.to_string(),
        })?;
        if r.source.chars().count() != r.target.chars().count() {
            return Err(LangError::Record {
                line: i + 1,
                msg: "source and target lengths differ".into(),
            });
        }
        out.push(r);
    }
    Ok(out)
}
