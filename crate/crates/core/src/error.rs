use thiserror::Error;

use crate::quad::QuadResult;

/// Errors raised by the analytic and Monte Carlo routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("domain error in {function}: {detail}")]
    Domain {
        function: &'static str,
        detail: String,
    },

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    #[error("{what} ({value}) is not divisible by {divisor}")]
    NotDivisible {
        what: &'static str,
        value: u64,
        divisor: u64,
    },

    #[error("subsystem exceeds environment: d_sub = {d_sub} > d_env = {d_env}")]
    SubsystemExceedsEnvironment { d_sub: u64, d_env: u64 },

    #[error("outside the Page regime: d_A d_B = {d_ab} > d_E = {d_e}")]
    Regime { d_ab: u64, d_e: u64 },

    #[error(
        "quadrature did not converge after {} subdivisions: estimate {} with error {} > tolerance {tolerance}",
        best.subdivisions, best.value, best.abs_error_estimate
    )]
    NonConvergence { best: QuadResult, tolerance: f64 },

    #[error("Jacobi eigensolver did not converge in {sweeps} sweeps (off-diagonal norm {off_norm})")]
    EigenNonConvergence { sweeps: usize, off_norm: f64 },

    #[error("insufficient samples: need at least {required}, have {available}")]
    InsufficientSamples { required: u64, available: u64 },
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn domain(function: &'static str, detail: impl Into<String>) -> Error {
    Error::Domain {
        function,
        detail: detail.into(),
    }
}
