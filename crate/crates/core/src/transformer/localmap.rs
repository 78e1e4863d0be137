use serde::{Deserialize, Serialize};

use super::ModelError;
use crate::fixedpoint::Precision;

/// One primitive step of a position-wise map. Numbers are significands.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "stage", rename_all = "lowercase")]
pub enum Stage {
    /// `round(M x + b)`, accumulated exactly.
    Affine { m: Vec<Vec<i64>>, b: Vec<i64> },
    Relu,
    /// Explicit input → output pairs.
    Table { entries: Vec<(Vec<i64>, Vec<i64>)> },
}

/// A function 𝔽^n → 𝔽^m built from stages applied left to right.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize, Default)]
#[serde(transparent)]
pub struct LocalMap(pub Vec<Stage>);

impl LocalMap {
    pub fn identity() -> Self {
        LocalMap(Vec::new())
    }

    /// `x ↦ M x + b`.
    pub fn affine(m: Vec<Vec<i64>>, b: Vec<i64>) -> Self {
        LocalMap(vec![Stage::Affine { m, b }])
    }

    /// Constant map of input width `n_in`.
    pub fn constant(n_in: usize, out: Vec<i64>) -> Self {
        let m = vec![vec![0; n_in]; out.len()];
        LocalMap::affine(m, out)
    }

    pub fn then(mut self, stage: Stage) -> Self {
        self.0.push(stage);
        self
    }

    /// Output width for input width `n_in`, checking every stage.
    pub fn out_width(&self, n_in: usize) -> Result<usize, ModelError> {
        let mut w = n_in;
        for (k, st) in self.0.iter().enumerate() {
            match st {
                Stage::Affine { m, b } => {
                    if m.len() != b.len() {
                        return Err(ModelError::Width(format!("stage {k}: {} rows but {} biases", m.len(), b.len())));
                    }
                    if let Some(row) = m.iter().find(|r| r.len() != w) {
                        return Err(ModelError::Width(format!(
                            "stage {k}: row of width {} applied to width {w}",
                            row.len()
                        )));
                    }
                    w = m.len();
                }
                Stage::Relu => {}
                Stage::Table { entries } => {
                    let mut out = None;
                    for (i, o) in entries {
                        if i.len() != w {
                            return Err(ModelError::Width(format!("stage {k}: table input of width {}", i.len())));
                        }
                        match out {
                            None => out = Some(o.len()),
                            Some(n) if n != o.len() => {
                                return Err(ModelError::Width(format!("stage {k}: ragged table outputs")))
                            }
                            _ => {}
                        }
                    }
                    w = out.unwrap_or(w);
                }
            }
        }
        Ok(w)
    }

    pub fn check_range(&self, prec: Precision) -> Result<(), ModelError> {
        let chk = |v: i64| {
            if prec.contains_sig(v) {
                Ok(())
            } else {
                Err(ModelError::OutOfRange(v))
            }
        };
        for st in &self.0 {
            match st {
                Stage::Affine { m, b } => {
                    m.iter().flatten().chain(b.iter()).try_for_each(|&v| chk(v))?;
                }
                Stage::Relu => {}
                Stage::Table { entries } => {
                    entries
                        .iter()
                        .flat_map(|(i, o)| i.iter().chain(o.iter()))
                        .try_for_each(|&v| chk(v))?;
                }
            }
        }
        Ok(())
    }

    /// Apply to significands. A table miss is an error.
    pub fn apply(&self, x: &[i64], prec: Precision) -> Result<Vec<i64>, ModelError> {
        self.apply_with(x, prec, false)
    }

    /// Apply, mapping table misses to the zero vector.
    pub fn apply_total(&self, x: &[i64], prec: Precision) -> Vec<i64> {
        self.apply_with(x, prec, true).expect("total application cannot fail")
    }

    fn apply_with(&self, x: &[i64], prec: Precision, total: bool) -> Result<Vec<i64>, ModelError> {
        let mut cur = x.to_vec();
        for st in &self.0 {
            cur = match st {
                Stage::Affine { m, b } => m
                    .iter()
                    .zip(b)
                    .map(|(row, &bias)| {
                        let acc: i128 = row
                            .iter()
                            .zip(&cur)
                            .map(|(&w, &v)| w as i128 * v as i128)
                            .sum::<i128>()
                            + ((bias as i128) << prec.s);
                        prec.round_shifted(acc, prec.s)
                    })
                    .collect(),
                Stage::Relu => cur.iter().map(|&v| v.max(0)).collect(),
                Stage::Table { entries } => match entries.iter().find(|(i, _)| *i == cur) {
                    Some((_, o)) => o.clone(),
                    None if total => {
                        let n = entries.first().map(|(_, o)| o.len()).unwrap_or(cur.len());
                        vec![0; n]
                    }
                    None => return Err(ModelError::TableMiss(cur)),
                },
            };
        }
        Ok(cur)
    }
}
