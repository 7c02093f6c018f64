//! Exact counting, uniform sampling and limit shapes for unimodal
//! sequences and overpartitions.
//!
//! The crate is organised bottom-up:
//!
//! * [`model`], [`geometry`], [`enumerate`]: the objects, their diagrams and
//!   brute-force enumerators.
//! * [`counting`]: arbitrary-precision counts from restricted partition
//!   tables, plus generating-function coefficients as an independent check.
//! * [`sampling`]: exact uniform generation by walking the same tables.
//! * [`curves`], [`special`], [`quad`]: the limit curves and the numerics
//!   behind them.
//! * [`asymptotics`]: saddle-point and growth-rate diagnostics.
//! * [`bijection`]: semi-strict sequences ↔ overpartitions.
//! * [`experiments`], [`svg`]: Monte Carlo reports and diagram output.

pub mod asymptotics;
pub mod bijection;
pub mod counting;
pub mod curves;
pub mod enumerate;
pub mod error;
pub mod exec;
pub mod experiments;
pub mod geometry;
pub mod model;
pub mod quad;
pub mod sampling;
pub mod special;
pub mod svg;
pub mod wide;

pub use error::{Error, Result};
pub use exec::Execution;
pub use model::{Family, Overpartition, UnimodalSequence};

/// Crate version, echoed in output headers.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
