//! Exact pair correlations, window geometry and boundary dimensions for
//! one-dimensional unimodular quadratic Pisot substitution tilings.

pub mod error;
pub mod exec;
pub mod linalg;
pub mod oracle;
pub mod overlap;
pub mod poly;
pub mod presets;
pub mod qfield;
pub mod renorm;
pub mod substitution;
pub mod window;

pub use error::{Error, Result};
pub use exec::Exec;
pub use qfield::{Field, FieldVal, QuadInt};
pub use renorm::{solve_self_consistent, CorrelationTable, CutoffRule};
pub use substitution::{Patch, SubstitutionSystem};
