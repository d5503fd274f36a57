//! Dimension records for bipartite and tripartite Hilbert-space splits.

use serde::Serialize;

use crate::error::{domain, Result};

/// A bipartite split `N = d_S d_E` into subsystem and environment.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct SubsystemDims {
    d_s: u64,
    d_e: u64,
}

impl SubsystemDims {
    pub fn new(d_s: u64, d_e: u64) -> Result<Self> {
        if d_s == 0 || d_e == 0 {
            return Err(domain(
                "SubsystemDims",
                format!("dimensions must be at least 1, got ({d_s}, {d_e})"),
            ));
        }
        if d_s.checked_mul(d_e).is_none() {
            return Err(domain("SubsystemDims", "total dimension overflows"));
        }
        Ok(Self { d_s, d_e })
    }

    pub fn d_s(&self) -> u64 {
        self.d_s
    }

    pub fn d_e(&self) -> u64 {
        self.d_e
    }

    /// Total dimension `N = d_S d_E`.
    pub fn n(&self) -> u64 {
        self.d_s * self.d_e
    }

    /// The same split seen from the environment's side.
    pub fn swapped(&self) -> Self {
        Self {
            d_s: self.d_e,
            d_e: self.d_s,
        }
    }
}

/// A tripartite split `N = d_A d_B d_E`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct TripartiteDims {
    d_a: u64,
    d_b: u64,
    d_e: u64,
    page_regime: bool,
}

impl TripartiteDims {
    pub fn new(d_a: u64, d_b: u64, d_e: u64) -> Result<Self> {
        if d_a == 0 || d_b == 0 || d_e == 0 {
            return Err(domain(
                "TripartiteDims",
                format!("dimensions must be at least 1, got ({d_a}, {d_b}, {d_e})"),
            ));
        }
        if d_a.checked_mul(d_b).and_then(|ab| ab.checked_mul(d_e)).is_none() {
            return Err(domain("TripartiteDims", "total dimension overflows"));
        }
        Ok(Self {
            d_a,
            d_b,
            d_e,
            page_regime: d_a * d_b <= d_e,
        })
    }

    pub fn d_a(&self) -> u64 {
        self.d_a
    }

    pub fn d_b(&self) -> u64 {
        self.d_b
    }

    pub fn d_e(&self) -> u64 {
        self.d_e
    }

    pub fn d_ab(&self) -> u64 {
        self.d_a * self.d_b
    }

    pub fn n(&self) -> u64 {
        self.d_a * self.d_b * self.d_e
    }

    /// `d_A d_B <= d_E`: Page's formula for `S(AB)` needs no swap.
    pub fn page_regime(&self) -> bool {
        self.page_regime
    }

    /// Exchanges the roles of A and B.
    pub fn swapped_ab(&self) -> Self {
        Self {
            d_a: self.d_b,
            d_b: self.d_a,
            ..*self
        }
    }
}
