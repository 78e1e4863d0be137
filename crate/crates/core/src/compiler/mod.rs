//! Formulas to transformers and back, with matching depth.

mod compile;
mod decompile;
mod synth;

pub use compile::compile;
pub use decompile::{decompile, decompile_with, division_bits, tautology, DecompileLimits};
pub use synth::{synth_function_formula, synth_table, MAX_SYNTH_BITS};

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CompileError {
    #[error("dialect: {0}")]
    Dialect(String),
    #[error("precision: {0}")]
    Precision(String),
    #[error("size limit: {0}")]
    Limit(String),
    #[error(transparent)]
    Model(#[from] crate::transformer::ModelError),
}
