//! Sparse sign-consistent Johnson-Lindenstrauss sketches.
//!
//! [`sketch`] samples projection matrices, [`oracle`] computes exact and
//! Monte Carlo moments of the embedding error, [`bounds`] evaluates the
//! moment bounds those errors are compared against, and [`counterexample`]
//! reproduces the two-spike comparison with the Hanson-Wright route.

pub mod bounds;
pub mod cli;
pub mod counterexample;
pub mod error;
pub mod experiments;
pub mod oracle;
pub mod rng;
pub mod sketch;
pub mod stats;

pub use error::{Error, Result};

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
