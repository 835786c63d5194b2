//! Monte Carlo machinery for random countable sets carried by a two-sided
//! Brownian path: local extrema, the last-zero families of squared Bessel
//! processes restarted at every window endpoint, honest indexations with
//! exponential-time splitting, and an exact finite model of sign noise with
//! its chaos decomposition.
//!
//! Everything downstream of a seed is deterministic: paths, solutions and
//! replicate experiments are pure functions of `(seed, grid, lineage)`, so
//! results are bit-identical across runs and worker counts.

pub mod bessel;
pub mod error;
pub mod indexation;
pub mod noise;
pub mod parallel;
pub mod paths;
pub mod rng;
pub mod sets;
pub mod stats;

pub use error::{Error, Result};
pub use paths::{BrownianPath, GridSpec, IncrementView};

/// Version string stamped into reports for provenance.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");

/// Schema version for all emitted JSON/CSV reports.
pub const SCHEMA_VERSION: u32 = 1;
