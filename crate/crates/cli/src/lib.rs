//! File formats, result cache, sweeps, the parameter-plane figure and the
//! self-check behind the `tautring` binary.

pub mod cache;
pub mod error;
pub mod figure;
pub mod point;
pub mod selfcheck;
pub mod sweep;

pub use error::{CliError, Result};
