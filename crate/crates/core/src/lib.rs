//! Phase-space quantization toolkit.
//!
//! Two engines share one set of conventions:
//!
//! * an FFT-based numeric engine for tau-Wigner distributions, ambiguity
//!   functions, Cohen-class filtering and discretized Shubin/Weyl/Born-Jordan
//!   operators on uniform periodic grids ([`grid`], [`fourier`], [`wigner`],
//!   [`quantize`], [`covariance`]);
//! * an exact symbolic engine for the noncommutative ordering calculus in
//!   `X`, `P` with rational coefficients in `hbar` and `tau` ([`symbolic`]).
//!
//! The [`suites`] module packages the invariant checks behind the `verify`
//! command-line surface; [`expr`] hosts the small expression language used
//! for potentials.

pub mod covariance;
pub mod error;
pub mod expr;
pub mod fft;
pub mod fourier;
pub mod grid;
pub mod quantize;
pub mod report;
pub mod signals;
pub mod suites;
pub mod symbolic;
pub mod wigner;

pub use error::{CoreError, Result};
pub use grid::{GridSpec, PhasePoint, PhaseSpaceField, Signal};
pub use quantize::{OperatorMatrix, SymbolSpec};
pub use wigner::TauParameter;

/// Configure the global worker pool used by the parallel matrix assembly.
/// Every result is independent of the thread count (each matrix entry is
/// produced by exactly one summand row).
pub fn set_worker_threads(threads: usize) -> std::result::Result<(), String> {
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| e.to_string())
}
