//! Einstein-product tensor algebra, Hermitian spectral calculus, closed-form
//! tail bounds for sums of random Hermitian tensors, and a Monte Carlo
//! harness that checks those bounds against sampled ensembles.
//!
//! Runnable examples live in `examples/`: `einstein_product`,
//! `spectral_calculus`, `bound_table`, `verify_gaussian_series`,
//! `chernoff_verification`, `bernstein_regimes`, `martingale_bounds`,
//! `expectation_sandwich` and `run_config`.

pub mod bounds;
pub mod cli;
pub mod ensembles;
pub mod error;
pub mod montecarlo;
pub mod spectral;
pub mod tensor;

pub use error::{Error, Result};
