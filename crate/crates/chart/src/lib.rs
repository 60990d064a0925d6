//! Affine-Riemann structures in a coordinate chart: a metric `G(x)` on a box
//! of `ℝⁿ` with the canonical flat connection. Criteria are evaluated at
//! deterministic sample points with analytic or finite-difference derivatives.

pub mod checks;
pub mod config;
pub mod error;
pub mod expr;
pub mod fd;
pub mod fixtures;
pub mod metric;
pub mod sample;

pub use checks::{
    balanced_k_check, hessian_check, koszul_at, pluriclosed_check, ricci_quadratic_at, CheckReport,
};
pub use error::{ChartError, Result};
pub use expr::Expr;
pub use fixtures::exemple_fixture;
pub use metric::{BoxDomain, ChartMetric, ExprMetric};
pub use sample::SamplePlan;
