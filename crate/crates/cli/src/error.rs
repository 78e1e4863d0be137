use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags or arguments (exit 1).
    #[error("{0}")]
    Usage(String),
    /// Input that is well-formed on the command line but rejected by the
    /// library (exit 2).
    #[error("{0}")]
    Domain(String),
    /// check-equiv found a counterexample (exit 3); the report is already
    /// printed.
    #[error("counterexample found")]
    Counterexample,
}

impl CliError {
    pub fn code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Domain(_) => 2,
            CliError::Counterexample => 3,
        }
    }
}

macro_rules! domain_from {
    ($($t:ty),*) => {
        $(impl From<$t> for CliError {
            fn from(e: $t) -> Self {
                CliError::Domain(e.to_string())
            }
        })*
    };
}

domain_from!(
    craspkit::formula::FormulaError,
    craspkit::transforms::TransformError,
    craspkit::transformer::ModelError,
    craspkit::compiler::CompileError,
    craspkit::maj2::Maj2Error,
    craspkit::languages::LangError,
    craspkit::equiv::EquivError,
    craspkit::fixedpoint::FixedError
);

pub type Result<T> = std::result::Result<T, CliError>;
