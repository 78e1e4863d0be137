//! Rewrites that keep both the language and the depth: sugar removal,
//! Y-normal form, and the neutral-letter reduction.

mod linear;
mod neutral;
mod simplify;
mod sugar;
mod ynf;

pub use linear::{less_than_zero, linearize, unit_sum, Linear};
pub use neutral::{neutral_letter_reduce, pad_word, NeutralReduction};
pub use simplify::{simplify, Folder};
pub use sugar::{
    desugar, eliminate_count_sugar, eliminate_ite, eliminate_strict_left, is_desugared,
    normalize_to_minimal_basis,
};
pub use ynf::{is_ynf, y_normal_form};

use thiserror::Error;

use crate::formula::FormulaError;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum TransformError {
    #[error("dialect: {0}")]
    Dialect(String),
    #[error("alphabet: {0}")]
    Alphabet(String),
    #[error(transparent)]
    Formula(#[from] FormulaError),
}
