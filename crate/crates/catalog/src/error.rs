use thiserror::Error;

#[derive(Debug, Error)]
pub enum CatalogError {
    #[error("catalog data: {0}")]
    Data(String),

    #[error("evaluation failed: {0}")]
    Eval(String),

    #[error("unknown entry {0:?}")]
    UnknownEntry(String),

    #[error("inadmissible parameters for {entry}: {reason}")]
    InadmissibleParams { entry: String, reason: String },

    #[error("{entry}: phase bracket [f{x},f{y}] is {computed:?}, table lists {expected:?}", x = .pair.0 + 1, y = .pair.1 + 1)]
    BracketMismatch { entry: String, pair: (usize, usize), expected: Vec<String>, computed: Vec<String> },

    #[error("row {row}: no admissible sample after {tried} attempts (most frequent rejection: {reason})")]
    Unsatisfiable { row: String, tried: usize, reason: String },

    #[error(transparent)]
    Core(#[from] gkforge_core::Error),
}

pub type Result<T> = std::result::Result<T, CatalogError>;
