//! Exact q-series arithmetic, particle-motion bijections and a verification
//! harness for partition identities with parity restrictions.

pub mod catalog;
pub mod combinatorics;
pub mod error;
pub mod motion;
pub mod qseries;
pub mod verify;

pub use error::{Error, Result};
pub use qseries::TruncatedSeries;
