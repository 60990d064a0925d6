use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("non-finite value at {location}")]
    NonFinite { location: String },

    #[error("shape mismatch: {0}")]
    Shape(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(
        "product is not left-symmetric: ass(e{a},e{b},e{c}) != ass(e{b},e{a},e{c}) (residual {residual})",
        a = .triple.0 + 1, b = .triple.1 + 1, c = .triple.2 + 1
    )]
    NotLeftSymmetric { triple: (usize, usize, usize), residual: f64 },

    #[error("metric is not symmetric at ({row},{col})", row = .0 + 1, col = .1 + 1)]
    NotSymmetric(usize, usize),

    #[error("metric is not positive definite: leading minor {order} is {value}")]
    NotPositiveDefinite { order: usize, value: f64 },

    #[error("metric is singular")]
    SingularMetric,

    #[error("lift of dimension {dim} exceeds the resource cap {cap}")]
    ResourceCap { dim: usize, cap: usize },

    #[error("unsupported: {0}")]
    Unsupported(String),
}

pub type Result<T> = std::result::Result<T, Error>;
