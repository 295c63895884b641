pub mod error;
pub mod freealg;
pub mod scalar;

pub use error::{Error, Result, SourceSpan};
pub use freealg::{GenId, GenTable, MonomialOrder, NCPoly, Word};
pub use scalar::{Param, Scalar};
pub mod report;
pub mod rewrite;
pub mod presentations;
pub mod linalg;
pub mod quantumgroup;
pub mod diffcalc;
pub mod coaction;
pub mod suites;
pub mod cli;
