//! Three-dimensional Novikov algebras, the Hermitian conditions tabulated for
//! their phase algebras, and a harness that samples metrics and re-checks the
//! claimed properties.

pub mod entry;
pub mod error;
pub mod expr;
pub mod fixtures;
pub mod reproduce;
pub mod row;

pub use entry::{entries, entry, instantiate, NovikovEntry};
pub use error::{CatalogError, Result};
pub use fixtures::{named_fixtures, FixturesReport};
pub use row::{rows, sample_row, sample_violating, ConditionRow, Property, Sample};
pub use reproduce::{reproduce_row, reproduce_tables, RowReport, RowStatus, TablesReport};
