//! Future-masked fixed-precision transformers and their exact forward pass.
//!
//! Every position-wise map is a [`LocalMap`]. Attention weights are
//! `exp_round(q·k)`; the weighted sums of values and weights are kept exact
//! and rounded once after dividing.

mod forward;
mod localmap;
pub mod pe;

use std::collections::BTreeMap;
use std::path::Path;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use forward::{accepts, forward, forward_with, Activations, ForwardOptions, LayerActivations, Matrix};
pub use localmap::{LocalMap, Stage};
pub use pe::{alibi_window, alibi_window_for_grid, Angle, PositionalEncoding, RotationTables};

use crate::fixedpoint::Precision;
use crate::formula::BOS;

#[derive(Debug, Error)]
pub enum ModelError {
    #[error("input must start with BOS `{0}`")]
    MissingBos(char),
    #[error("symbol `{0}` is not in the model alphabet")]
    ForeignSymbol(char),
    #[error("schema: {0}")]
    Schema(String),
    #[error("parameter {0} is outside the significand range")]
    OutOfRange(i64),
    #[error("no table entry for input {0:?}")]
    TableMiss(Vec<i64>),
    #[error("width mismatch: {0}")]
    Width(String),
    #[error("json: {0}")]
    Json(#[from] serde_json::Error),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
    #[error("precision: {0}")]
    Precision(#[from] crate::fixedpoint::FixedError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Layer {
    pub wq: LocalMap,
    pub wk: LocalMap,
    pub wv: LocalMap,
    pub f: LocalMap,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Transformer {
    pub precision: Precision,
    /// Word symbols, BOS excluded.
    pub alphabet: Vec<char>,
    pub bos: char,
    pub d: usize,
    /// Significands of E(σ), including the BOS row.
    pub embedding: BTreeMap<char, Vec<i64>>,
    pub layers: Vec<Layer>,
    pub w_out: LocalMap,
    #[serde(default)]
    pub pe: PositionalEncoding,
    /// Free-form notes, e.g. the coordinate layout of compiled models.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub meta: Option<serde_json::Value>,
}

impl Transformer {
    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    /// Check widths, ranges and the embedding table.
    pub fn validate(&self) -> Result<(), ModelError> {
        Precision::new(self.precision.p, self.precision.s)?;
        let prec = self.precision;
        if self.alphabet.contains(&self.bos) {
            return Err(ModelError::Schema("BOS listed in the alphabet".into()));
        }
        for c in self.alphabet.iter().chain(std::iter::once(&self.bos)) {
            match self.embedding.get(c) {
                None => return Err(ModelError::Schema(format!("no embedding for `{c}`"))),
                Some(v) if v.len() != self.d => {
                    return Err(ModelError::Width(format!("embedding of `{c}` has width {}", v.len())))
                }
                Some(v) => {
                    if let Some(&x) = v.iter().find(|&&x| !prec.contains_sig(x)) {
                        return Err(ModelError::OutOfRange(x));
                    }
                }
            }
        }
        if let Some(c) = self.embedding.keys().find(|c| **c != self.bos && !self.alphabet.contains(c)) {
            return Err(ModelError::Schema(format!("embedding for unknown symbol `{c}`")));
        }
        for (l, layer) in self.layers.iter().enumerate() {
            for m in [&layer.wq, &layer.wk, &layer.wv, &layer.f] {
                m.check_range(prec)?;
            }
            let dq = layer.wq.out_width(self.d)?;
            let dk = layer.wk.out_width(self.d)?;
            if dq != dk {
                return Err(ModelError::Width(format!("layer {l}: query width {dq} vs key width {dk}")));
            }
            if layer.wv.out_width(self.d)? != self.d {
                return Err(ModelError::Width(format!("layer {l}: value map must return width d")));
            }
            if layer.f.out_width(self.d)? != self.d {
                return Err(ModelError::Width(format!("layer {l}: f must return width d")));
            }
            if let PositionalEncoding::Rope { angles } = &self.pe {
                if dq % 2 != 0 || angles.len() != dq / 2 {
                    return Err(ModelError::Width(format!("layer {l}: rope needs one angle per query pair")));
                }
            }
        }
        self.w_out.check_range(prec)?;
        if self.w_out.out_width(self.d)? != 1 {
            return Err(ModelError::Width("output map must return one value".into()));
        }
        match &self.pe {
            PositionalEncoding::Sinusoidal { angles } => {
                if self.d % 2 != 0 || angles.len() != self.d / 2 {
                    return Err(ModelError::Width("sinusoidal encoding needs one angle per pair".into()));
                }
                check_angles(angles)?;
            }
            PositionalEncoding::Rope { angles } => check_angles(angles)?,
            PositionalEncoding::Alibi { a } => {
                if !prec.contains_sig(*a) {
                    return Err(ModelError::OutOfRange(*a));
                }
            }
            PositionalEncoding::None => {}
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self, ModelError> {
        let mut t: Transformer = serde_json::from_str(text)?;
        // Accept an alphabet that lists BOS too.
        let bos = t.bos;
        t.alphabet.retain(|c| *c != bos);
        t.validate()?;
        Ok(t)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("model serializes")
    }

    pub fn load(path: &Path) -> Result<Self, ModelError> {
        Self::from_json(&std::fs::read_to_string(path)?)
    }

    pub fn save(&self, path: &Path) -> Result<(), ModelError> {
        std::fs::write(path, self.to_json() + "\n")?;
        Ok(())
    }

    /// Accept a raw word (BOS is prepended).
    pub fn accepts_word(&self, w: &[char]) -> Result<bool, ModelError> {
        let mut input = Vec::with_capacity(w.len() + 1);
        input.push(self.bos);
        input.extend_from_slice(w);
        accepts(self, &input)
    }
}

fn check_angles(angles: &[Angle]) -> Result<(), ModelError> {
    for a in angles {
        if a.period == 0 {
            return Err(ModelError::Schema("angle period must be positive".into()));
        }
    }
    Ok(())
}

impl Default for Transformer {
    fn default() -> Self {
        Transformer {
            precision: Precision { p: 8, s: 2 },
            alphabet: Vec::new(),
            bos: BOS,
            d: 1,
            embedding: BTreeMap::new(),
            layers: Vec::new(),
            w_out: LocalMap::identity(),
            pe: PositionalEncoding::None,
            meta: None,
        }
    }
}
