//! Affine-Riemann structures on finite-dimensional left-symmetric algebras.
//!
//! Every computation is generic over [`Scalar`], with exact rationals and
//! `f64` as the two supported fields. Indices are 0-based in the API and
//! 1-based only in rendered messages.

pub mod algebra;
pub mod classify;
pub mod connection;
pub mod error;
pub mod forms;
pub mod hermitian;
pub mod invariants;
pub mod io;
pub mod levi_civita;
pub mod lift;
pub mod linalg;
pub mod metric;
pub mod phase;
pub mod poly;
pub mod random;
pub mod rigid;
pub mod scalar;
pub mod tensor;

pub use algebra::{product_from_entries, validate_algebra, Algebra};
pub use classify::{classify, ClassificationReport, Flag};
pub use connection::{difference_tensor, AffineRiemann, DifferenceTensor, RicciForm};
pub use error::{Error, Result};
pub use forms::Form;
pub use lift::{iterate_lift, LiftLevel};
pub use levi_civita::{levi_civita, LcProduct};
pub use linalg::Matrix;
pub use metric::Metric;
pub use phase::{phase, PhaseStructure};
pub use scalar::{Rational, Scalar};
pub use tensor::{Bilinear, OperatorPairs, Trilinear};
