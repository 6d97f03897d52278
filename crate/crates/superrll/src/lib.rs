//! Exact verification engine for the RLL-presented two-parameter quantum affine
//! superalgebra on gl(1|1).

pub mod algebra;
pub mod consistency;
pub mod currents;
pub mod error;
pub mod evalrep;
pub mod hopf;
pub mod linear;
pub mod relations;
pub mod report;
pub mod rewrite;
pub mod rmatrix;
pub mod suite;

pub use error::EngineError;
pub use report::{Outcome, ReportBuilder, Residue, Status, Summary, Tally, VerificationReport};
