//! Exact finite-size typicality statistics of Haar-random pure states.
//!
//! | Module | Contents |
//! |--------|----------|
//! | [`special_fn`] | harmonic numbers, digamma, log-gamma, exact Bernoulli numbers, incomplete beta |
//! | [`quad`] | adaptive Gauss–Kronrod quadrature on finite and exponentially decaying domains |
//! | [`pclt`] | projected-sphere laws, the Beta law of subsystem probabilities, Gaussian comparison |
//! | [`spectral`] | Lubkin purity, Page entropy and its diagonal/eigenvalue split, Bloch variances |
//! | [`mutual_info`] | typical mutual information: harmonic, Bernoulli-series and Bose–Einstein integral forms |
//! | [`haar_mc`] | Monte Carlo oracle over Haar-random states |
//! | [`report`] | the acceptance battery shared by the CLI and the test suite |
//!
//! All entropies are in nats.

pub mod dims;
pub mod error;
pub mod haar_mc;
pub mod mutual_info;
pub mod pclt;
pub mod quad;
pub mod report;
pub mod special_fn;
pub mod spectral;

/// Exact rational with arbitrary-precision numerator and denominator.
pub type Rational = num_rational::BigRational;

pub use dims::{SubsystemDims, TripartiteDims};
pub use error::{Error, Result};
pub use quad::{QuadConfig, QuadResult};

/// Library version, reported in machine-readable output.
pub const VERSION: &str = env!("CARGO_PKG_VERSION");
