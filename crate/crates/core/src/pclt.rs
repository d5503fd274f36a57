//! Exact laws of projections of a uniform point on the hypersphere.
//!
//! A uniform point on `S^{n-1}` projected onto an `m`-dimensional subspace
//! has a density on the unit ball, and its squared radius follows
//! `Beta(m/2, (n-m)/2)`. For a Haar-random pure state on `C^{d_S} ⊗ C^{d_E}`
//! the subsystem probability `P_k = Σ_j |c_{k,j}|²` is exactly such a
//! squared radius with `n = 2N` and `m = 2 d_E`, so `P_k ~ Beta(d_E,
//! d_E (d_S - 1))`. The matched Gaussian shares its first two moments but
//! not its bounded support; [`tail_comparison`] quantifies the difference.

use serde::Serialize;

use crate::dims::SubsystemDims;
use crate::error::{domain, Error, Result};
use crate::special_fn::{self, ln_gamma, log_beta};

/// Embedding dimension `n` and projected dimension `m` (real dimensions).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ProjectionGeometry {
    n: u64,
    m: u64,
}

impl ProjectionGeometry {
    pub fn new(n: u64, m: u64) -> Result<Self> {
        if m == 0 || m >= n {
            return Err(domain(
                "ProjectionGeometry",
                format!("need 1 <= m < n, got n = {n}, m = {m}"),
            ));
        }
        Ok(Self { n, m })
    }

    /// `n = 2N`, `m = 2 d_E`: the real geometry behind one subsystem probability.
    pub fn for_subsystem(dims: SubsystemDims) -> Result<Self> {
        Self::new(2 * dims.n(), 2 * dims.d_e())
    }

    pub fn n(&self) -> u64 {
        self.n
    }

    pub fn m(&self) -> u64 {
        self.m
    }
}

/// A Beta distribution on `[0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BetaLaw {
    pub alpha: f64,
    pub beta: f64,
}

impl BetaLaw {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha > 0.0) || !(beta > 0.0) || !alpha.is_finite() || !beta.is_finite() {
            return Err(domain("BetaLaw", format!("shapes must be positive, got ({alpha}, {beta})")));
        }
        Ok(Self { alpha, beta })
    }

    pub fn mean(&self) -> f64 {
        self.alpha / (self.alpha + self.beta)
    }

    pub fn variance(&self) -> f64 {
        let s = self.alpha + self.beta;
        self.alpha * self.beta / (s * s * (s + 1.0))
    }

    /// Excess kurtosis (zero for a normal distribution).
    pub fn excess_kurtosis(&self) -> f64 {
        let (a, b) = (self.alpha, self.beta);
        let s = a + b;
        6.0 * ((a - b).powi(2) * (s + 1.0) - a * b * (s + 2.0)) / (a * b * (s + 2.0) * (s + 3.0))
    }

    /// Natural log of the density; `-inf` where the density vanishes.
    pub fn ln_density(&self, x: f64) -> Result<f64> {
        if !(0.0..=1.0).contains(&x) {
            return Err(domain("BetaLaw::ln_density", format!("x must lie in [0, 1], got {x}")));
        }
        let power = |shape: f64, base: f64| {
            if shape == 1.0 {
                0.0
            } else {
                (shape - 1.0) * base
            }
        };
        Ok(power(self.alpha, x.ln()) + power(self.beta, (-x).ln_1p()) - log_beta(self.alpha, self.beta)?)
    }

    pub fn density(&self, x: f64) -> Result<f64> {
        Ok(self.ln_density(x)?.exp())
    }

    /// `P(X <= x)`.
    pub fn cdf(&self, x: f64) -> Result<f64> {
        special_fn::reg_incomplete_beta(x, self.alpha, self.beta)
    }

    /// `P(X > x)`, computed without cancellation in the upper tail.
    pub fn sf(&self, x: f64) -> Result<f64> {
        special_fn::reg_incomplete_beta_complement(x, self.alpha, self.beta)
    }
}

/// Density of the projection of a uniform point on `S^{n-1}` onto the
/// first `m` coordinates:
/// `Γ(n/2) / [π^{m/2} Γ((n-m)/2)] (1 - |x|²)^{(n-m-2)/2}` inside the unit ball.
pub fn projected_density(geom: ProjectionGeometry, x: &[f64]) -> Result<f64> {
    if x.len() as u64 != geom.m {
        return Err(Error::DimensionMismatch {
            expected: geom.m as usize,
            actual: x.len(),
        });
    }
    let r2: f64 = x.iter().map(|v| v * v).sum();
    if r2 > 1.0 {
        return Ok(0.0);
    }
    let n = geom.n as f64;
    let m = geom.m as f64;
    let exponent = (n - m - 2.0) / 2.0;
    let ln_norm = ln_gamma(n / 2.0)? - (m / 2.0) * std::f64::consts::PI.ln() - ln_gamma((n - m) / 2.0)?;
    let radial = if exponent == 0.0 {
        0.0
    } else {
        exponent * (-r2).ln_1p()
    };
    Ok((ln_norm + radial).exp())
}

/// Law of `|x|²` for the projected point: `Beta(m/2, (n-m)/2)`.
pub fn radial_squared_law(geom: ProjectionGeometry) -> BetaLaw {
    BetaLaw {
        alpha: geom.m as f64 / 2.0,
        beta: (geom.n - geom.m) as f64 / 2.0,
    }
}

fn require_nontrivial(function: &'static str, dims: SubsystemDims) -> Result<()> {
    if dims.d_s() < 2 {
        return Err(domain(function, format!("need d_S >= 2, got {}", dims.d_s())));
    }
    Ok(())
}

/// Law of a single subsystem probability: `Beta(d_E, d_E (d_S - 1))`.
pub fn pk_law(dims: SubsystemDims) -> Result<BetaLaw> {
    require_nontrivial("pk_law", dims)?;
    BetaLaw::new(dims.d_e() as f64, (dims.d_e() * (dims.d_s() - 1)) as f64)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PkMoments {
    pub mean: f64,
    pub variance: f64,
    pub excess_kurtosis: f64,
}

pub fn pk_moments(dims: SubsystemDims) -> Result<PkMoments> {
    let law = pk_law(dims)?;
    let d_s = dims.d_s() as f64;
    Ok(PkMoments {
        mean: 1.0 / d_s,
        variance: (d_s - 1.0) / (d_s * d_s * (dims.n() as f64 + 1.0)),
        excess_kurtosis: law.excess_kurtosis(),
    })
}

pub fn pk_density(dims: SubsystemDims, p: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&p) {
        return Err(domain("pk_density", format!("p must lie in [0, 1], got {p}")));
    }
    pk_law(dims)?.density(p)
}

/// Normal density with the mean and variance of the subsystem probability.
/// Defined on the whole real line.
pub fn gaussian_matched_density(dims: SubsystemDims, p: f64) -> Result<f64> {
    let m = pk_moments(dims)?;
    let z2 = (p - m.mean).powi(2) / m.variance;
    Ok((-0.5 * z2).exp() / (2.0 * std::f64::consts::PI * m.variance).sqrt())
}

/// One-sided upper tail of the matched normal, `P(X > p)`.
pub fn gaussian_matched_tail(dims: SubsystemDims, p: f64) -> Result<f64> {
    let m = pk_moments(dims)?;
    let z = (p - m.mean) / (2.0 * m.variance).sqrt();
    Ok(0.5 * special_fn::erfc(z))
}

/// Exact versus matched-Gaussian densities and upper tails at a threshold.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TailComparison {
    pub threshold: f64,
    pub exact_density: f64,
    pub gaussian_density: f64,
    pub exact_tail: f64,
    pub gaussian_tail: f64,
}

impl TailComparison {
    pub fn density_ratio(&self) -> f64 {
        self.gaussian_density / self.exact_density
    }

    pub fn tail_ratio(&self) -> f64 {
        self.gaussian_tail / self.exact_tail
    }
}

pub fn tail_comparison(dims: SubsystemDims, threshold: f64) -> Result<TailComparison> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(domain(
            "tail_comparison",
            format!("threshold must lie in (0, 1], got {threshold}"),
        ));
    }
    let law = pk_law(dims)?;
    // The kinematic boundary is exact: nothing lies beyond p = 1.
    let exact_tail = if threshold == 1.0 { 0.0 } else { law.sf(threshold)? };
    Ok(TailComparison {
        threshold,
        exact_density: law.density(threshold)?,
        gaussian_density: gaussian_matched_density(dims, threshold)?,
        exact_tail,
        gaussian_tail: gaussian_matched_tail(dims, threshold)?,
    })
}

/// One row of the density/tail figure table.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FigureRow {
    pub p: f64,
    pub exact_density: f64,
    pub gaussian_density: f64,
    pub exact_tail: f64,
    pub gaussian_tail: f64,
}

/// Upper end of the figure grid; past 1 only the Gaussian has mass.
pub const FIGURE_GRID_END: f64 = 1.05;

/// Densities and tails on a uniform grid over `[0, 1.05]`.
pub fn figure1_data(dims: SubsystemDims, grid_points: usize) -> Result<Vec<FigureRow>> {
    if grid_points < 2 {
        return Err(domain("figure1_data", format!("need at least 2 grid points, got {grid_points}")));
    }
    let law = pk_law(dims)?;
    let last = (grid_points - 1) as f64;
    (0..grid_points)
        .map(|i| {
            let p = i as f64 * FIGURE_GRID_END / last;
            let (exact_density, exact_tail) = if p > 1.0 {
                (0.0, 0.0)
            } else if p == 1.0 {
                (law.density(p)?, 0.0)
            } else {
                (law.density(p)?, law.sf(p)?)
            };
            Ok(FigureRow {
                p,
                exact_density,
                gaussian_density: gaussian_matched_density(dims, p)?,
                exact_tail,
                gaussian_tail: gaussian_matched_tail(dims, p)?,
            })
        })
        .collect()
}
