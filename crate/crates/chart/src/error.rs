use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ChartError {
    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid metric: {0}")]
    InvalidMetric(String),

    #[error("metric is singular at {point:?}")]
    SingularMetricAtPoint { point: Vec<f64> },

    #[error("metric is not positive definite at {point:?}")]
    NotPositiveDefinite { point: Vec<f64> },

    #[error("metric is not Hessian at {point:?} (Codazzi residual {residual:e})")]
    NotHessian { point: Vec<f64>, residual: f64 },

    #[error("domain contains the origin")]
    DomainContainsOrigin,

    #[error("sample plan is empty: the domain is thinner than twice the margin {margin:e}")]
    EmptyPlan { margin: f64 },
}

pub type Result<T> = std::result::Result<T, ChartError>;
