//! Closed-form Haar averages of purity, entropy and Bloch components of a
//! reduced state `ρ_S` obtained from a random pure state on `C^{d_S} ⊗ C^{d_E}`.

use num_bigint::BigInt;
use serde::Serialize;

use crate::dims::SubsystemDims;
use crate::error::{domain, Error, Result};
use crate::special_fn::{harmonic_range, harmonic_range_rational, rational_to_f64};
use crate::Rational;

/// Average purity split into diagonal (`Σ_k ⟨P_k²⟩`) and coherence
/// (`Σ_{k≠l} ⟨|ρ_kl|²⟩`) contributions.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PuritySplit {
    pub diagonal: f64,
    pub off_diagonal: f64,
    pub total: f64,
}

/// [`PuritySplit`] in exact arithmetic.
#[derive(Debug, Clone, PartialEq)]
pub struct PuritySplitExact {
    pub diagonal: Rational,
    pub off_diagonal: Rational,
    pub total: Rational,
}

fn ratio(num: u64, den: u64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

/// Lubkin's average purity `(d_S + d_E)/(N + 1)` and its split, exactly.
pub fn lubkin_purity_exact(dims: SubsystemDims) -> PuritySplitExact {
    let n1 = dims.n() + 1;
    PuritySplitExact {
        diagonal: ratio(dims.d_e() + 1, n1),
        off_diagonal: ratio(dims.d_s() - 1, n1),
        total: ratio(dims.d_s() + dims.d_e(), n1),
    }
}

pub fn lubkin_purity(dims: SubsystemDims) -> PuritySplit {
    let n1 = dims.n() as f64 + 1.0;
    PuritySplit {
        diagonal: (dims.d_e() as f64 + 1.0) / n1,
        off_diagonal: (dims.d_s() as f64 - 1.0) / n1,
        total: (dims.d_s() + dims.d_e()) as f64 / n1,
    }
}

/// `⟨|c_{k,j}|² |c_{l,m}|²⟩ = 1/[N(N+1)]` for distinct index pairs of a
/// Haar state on `C^N`.
pub fn dirichlet_cross_moment(n: u64) -> Result<f64> {
    if n < 2 {
        return Err(domain("dirichlet_cross_moment", format!("need N >= 2, got {n}")));
    }
    let n = n as f64;
    Ok(1.0 / (n * (n + 1.0)))
}

/// Page's average entropy split into the diagonal (Dirichlet) entropy and
/// the eigenvalue correction, in nats.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct EntropySplit {
    pub diagonal_entropy: f64,
    pub eigenvalue_correction: f64,
    pub von_neumann: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropySplitExact {
    pub diagonal_entropy: Rational,
    pub eigenvalue_correction: Rational,
}

impl EntropySplitExact {
    pub fn von_neumann(&self) -> Rational {
        &self.diagonal_entropy + &self.eigenvalue_correction
    }
}

fn check_ordered(d_sub: u64, d_env: u64) -> Result<()> {
    if d_sub == 0 || d_env == 0 {
        return Err(domain("page_entropy", format!("dimensions must be positive, got ({d_sub}, {d_env})")));
    }
    if d_sub > d_env {
        return Err(Error::SubsystemExceedsEnvironment { d_sub, d_env });
    }
    Ok(())
}

/// `⟨S(ρ_sub)⟩ = [ψ(N+1) − ψ(d_env+1)] − (d_sub − 1)/(2 d_env)` for
/// `d_sub <= d_env`. The caller orders the arguments.
pub fn page_entropy(d_sub: u64, d_env: u64) -> Result<EntropySplit> {
    check_ordered(d_sub, d_env)?;
    let diagonal_entropy = harmonic_range(d_env, d_sub * d_env);
    let eigenvalue_correction = -((d_sub - 1) as f64) / (2.0 * d_env as f64);
    Ok(EntropySplit {
        diagonal_entropy,
        eigenvalue_correction,
        von_neumann: diagonal_entropy + eigenvalue_correction,
    })
}

/// [`page_entropy`] in exact rational arithmetic (all terms are rational
/// for integer dimensions).
pub fn page_entropy_exact(d_sub: u64, d_env: u64) -> Result<EntropySplitExact> {
    check_ordered(d_sub, d_env)?;
    Ok(EntropySplitExact {
        diagonal_entropy: harmonic_range_rational(d_env, d_sub * d_env),
        eigenvalue_correction: -ratio(d_sub - 1, 2 * d_env),
    })
}

/// `⟨P_k ln P_k⟩ = [ψ(d_E+1) − ψ(N+1)]/d_S` for `P_k ~ Beta(d_E, N − d_E)`.
pub fn dirichlet_plogp(dims: SubsystemDims) -> f64 {
    -harmonic_range(dims.d_e(), dims.n()) / dims.d_s() as f64
}

/// Leading large-`N` entropy `ln d_S − (d_S² − 1)/(2N)`.
pub fn entropy_leading(dims: SubsystemDims) -> Result<f64> {
    if dims.d_s() > dims.d_e() {
        return Err(Error::SubsystemExceedsEnvironment {
            d_sub: dims.d_s(),
            d_env: dims.d_e(),
        });
    }
    let d = dims.d_s() as f64;
    Ok(d.ln() - (d * d - 1.0) / (2.0 * dims.n() as f64))
}

/// Haar second moments of the generalized Bloch components: every
/// generator carries `⟨r_a²⟩ = 2/[d(N+1)]`, Cartan or not.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct BlochVariancePrediction {
    pub cartan_total: f64,
    pub offdiag_total: f64,
    pub per_generator: f64,
    pub cartan_count: u64,
    pub offdiag_count: u64,
}

impl BlochVariancePrediction {
    /// `Σ_a ⟨r_a²⟩ = 2[(d + N/d)/(N+1) − 1/d]`.
    pub fn total(&self) -> f64 {
        self.cartan_total + self.offdiag_total
    }
}

pub fn bloch_variance_prediction(d: u64, n: u64) -> Result<BlochVariancePrediction> {
    if d < 2 {
        return Err(domain("bloch_variance_prediction", format!("need d >= 2, got {d}")));
    }
    if n == 0 || n % d != 0 {
        return Err(Error::NotDivisible {
            what: "total dimension N",
            value: n,
            divisor: d,
        });
    }
    let df = d as f64;
    let n1 = n as f64 + 1.0;
    let per_generator = 2.0 / (df * n1);
    Ok(BlochVariancePrediction {
        cartan_total: 2.0 * (df - 1.0) / (df * n1),
        offdiag_total: 2.0 * (df - 1.0) / n1,
        per_generator,
        cartan_count: d - 1,
        offdiag_count: d * (d - 1),
    })
}

/// `Σ_a ⟨r_a²⟩` from Lubkin's purity, for cross-checking the per-family split.
pub fn bloch_total_from_purity(d: u64, n: u64) -> Result<f64> {
    if d == 0 || n % d != 0 {
        return Err(Error::NotDivisible {
            what: "total dimension N",
            value: n,
            divisor: d,
        });
    }
    let purity = lubkin_purity(SubsystemDims::new(d, n / d)?).total;
    Ok(2.0 * (purity - 1.0 / d as f64))
}

/// Exact value of an [`EntropySplitExact`] as floating point.
pub fn exact_entropy_to_f64(split: &EntropySplitExact) -> EntropySplit {
    let diagonal_entropy = rational_to_f64(&split.diagonal_entropy);
    let eigenvalue_correction = rational_to_f64(&split.eigenvalue_correction);
    EntropySplit {
        diagonal_entropy,
        eigenvalue_correction,
        von_neumann: rational_to_f64(&split.von_neumann()),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::special_fn::harmonic;
    use approx::assert_relative_eq;

    fn dims(d_s: u64, d_e: u64) -> SubsystemDims {
        SubsystemDims::new(d_s, d_e).unwrap()
    }

    #[test]
    fn lubkin_reference_values() {
        let p = lubkin_purity(dims(2, 6));
        assert_relative_eq!(p.total, 8.0 / 13.0, max_relative = 1e-15);
        assert_relative_eq!(p.diagonal, 7.0 / 13.0, max_relative = 1e-15);
        assert_relative_eq!(p.off_diagonal, 1.0 / 13.0, max_relative = 1e-15);
        assert_eq!(lubkin_purity(dims(2, 1)).total, 1.0);
        assert!((lubkin_purity(dims(3, 1_000_000)).total - 1.0 / 3.0).abs() < 1e-5);
        let exact = lubkin_purity_exact(dims(2, 6));
        assert_eq!(exact.total, ratio(8, 13));
    }

    #[test]
    fn lubkin_split_is_exact_on_grid() {
        for d_s in 1..=8 {
            for d_e in 1..=16 {
                let e = lubkin_purity_exact(dims(d_s, d_e));
                assert_eq!(&e.diagonal + &e.off_diagonal, e.total);
                let f = lubkin_purity(dims(d_s, d_e));
                assert!((f.diagonal + f.off_diagonal - f.total).abs() <= 1e-14);
                assert!(f.total >= 1.0 / d_s as f64 - 1e-15 && f.total <= 1.0 + 1e-15);
            }
        }
    }

    #[test]
    fn cross_moments() {
        assert_relative_eq!(dirichlet_cross_moment(2).unwrap(), 1.0 / 6.0);
        assert_relative_eq!(dirichlet_cross_moment(3).unwrap(), 1.0 / 12.0);
        assert_relative_eq!(dirichlet_cross_moment(12).unwrap(), 1.0 / 156.0);
        assert!(dirichlet_cross_moment(1).is_err());
    }

    #[test]
    fn cross_moment_matches_simplex_quadrature() {
        // ⟨x(1−x)⟩ under Dir(1,1) is ∫₀¹ x(1−x) dx; Dir(1,1,1) has density 2
        // on the 2-simplex and ⟨x y⟩ = 2 ∫∫ x y.
        let n = 2000;
        let h = 1.0 / n as f64;
        let mut one = 0.0;
        let mut two = 0.0;
        for i in 0..n {
            let x = (i as f64 + 0.5) * h;
            one += x * (1.0 - x) * h;
            // ∫_0^{1−x} y dy = (1−x)²/2
            two += 2.0 * x * (1.0 - x).powi(2) / 2.0 * h;
        }
        assert!((one - dirichlet_cross_moment(2).unwrap()).abs() < 1e-6);
        assert!((two - dirichlet_cross_moment(3).unwrap()).abs() < 1e-6);
    }

    #[test]
    fn page_reference_values() {
        let s = page_entropy(2, 6).unwrap();
        assert_relative_eq!(s.diagonal_entropy, harmonic(12) - harmonic(6), max_relative = 1e-14);
        assert_relative_eq!(s.von_neumann, harmonic(12) - harmonic(6) - 1.0 / 12.0, max_relative = 1e-14);
        assert!((s.von_neumann - 0.569877).abs() < 1e-6);
        assert!((s.diagonal_entropy - 0.653211).abs() < 1e-6);
        let trivial = page_entropy(1, 9).unwrap();
        assert_eq!(trivial.von_neumann, 0.0);
        assert!(matches!(
            page_entropy(3, 2),
            Err(Error::SubsystemExceedsEnvironment { d_sub: 3, d_env: 2 })
        ));
        let exact = page_entropy_exact(2, 6).unwrap();
        assert_eq!(exact.von_neumann(), ratio(86021, 27720) - ratio(49, 20) - ratio(1, 12));
        assert_relative_eq!(exact_entropy_to_f64(&exact).von_neumann, s.von_neumann, max_relative = 1e-15);
    }

    #[test]
    fn page_split_respects_schur_and_bounds() {
        for d in 1..=6 {
            for e in d..=40 {
                let s = page_entropy(d, e).unwrap();
                assert!(s.eigenvalue_correction <= 0.0);
                assert!(s.von_neumann <= s.diagonal_entropy);
                assert!((s.diagonal_entropy + s.eigenvalue_correction - s.von_neumann).abs() <= 1e-14);
                assert!(s.von_neumann >= 0.0 && s.von_neumann <= (d as f64).ln() + 1e-15);
            }
        }
    }

    #[test]
    fn page_is_monotone_in_environment() {
        for d in 2..=4 {
            let values: Vec<f64> = (d..=64).map(|e| page_entropy(d, e).unwrap().von_neumann).collect();
            assert!(values.windows(2).all(|w| w[1] > w[0]), "d = {d}");
        }
    }

    #[test]
    fn plogp_sums_to_diagonal_entropy() {
        assert_relative_eq!(
            dirichlet_plogp(dims(2, 6)),
            0.5 * (harmonic(6) - harmonic(12)),
            max_relative = 1e-14
        );
        assert!((dirichlet_plogp(dims(2, 6)) + 0.326606).abs() < 1e-6);
        assert_eq!(dirichlet_plogp(dims(1, 7)), 0.0);
        for d_s in 2..=5 {
            for d_e in d_s..=12 {
                let d = dims(d_s, d_e);
                let s = page_entropy(d_s, d_e).unwrap();
                assert!((-(d_s as f64) * dirichlet_plogp(d) - s.diagonal_entropy).abs() < 1e-14);
            }
        }
        // d_E = 1: (ψ(2) − ψ(d_S+1))/d_S
        let d = dims(4, 1);
        assert_relative_eq!(dirichlet_plogp(d), (harmonic(1) - harmonic(4)) / 4.0, max_relative = 1e-14);
    }

    #[test]
    fn leading_entropy() {
        assert_relative_eq!(
            entropy_leading(dims(2, 6)).unwrap(),
            std::f64::consts::LN_2 - 3.0 / 24.0,
            max_relative = 1e-15
        );
        assert!((entropy_leading(dims(2, 6)).unwrap() - 0.568147).abs() < 1e-6);
        assert_eq!(entropy_leading(dims(1, 5)).unwrap(), 0.0);
        assert_relative_eq!(entropy_leading(dims(2, 2)).unwrap(), std::f64::consts::LN_2 - 3.0 / 8.0);
        assert!(entropy_leading(dims(3, 2)).is_err());
        let exact = page_entropy(2, 6).unwrap().von_neumann;
        assert!((entropy_leading(dims(2, 6)).unwrap() - exact).abs() < 0.002);
    }

    #[test]
    fn leading_entropy_next_order_bound() {
        for d in 2..=4u64 {
            for e in d..=200 {
                let n = d * e;
                if n < 32 {
                    continue;
                }
                let lead = entropy_leading(dims(d, e)).unwrap();
                let exact = page_entropy(d, e).unwrap().von_neumann;
                let bound = (d * d - 1) as f64 / (2.0 * (n * n) as f64) * 2.0;
                assert!((lead - exact).abs() <= bound, "d = {d}, e = {e}");
            }
        }
    }

    #[test]
    fn bloch_predictions() {
        let p = bloch_variance_prediction(2, 12).unwrap();
        assert_relative_eq!(p.per_generator, 1.0 / 13.0, max_relative = 1e-15);
        assert_relative_eq!(p.cartan_total, 1.0 / 13.0, max_relative = 1e-15);
        assert_relative_eq!(p.offdiag_total, 2.0 / 13.0, max_relative = 1e-15);
        assert_eq!((p.cartan_count, p.offdiag_count), (1, 2));
        let p = bloch_variance_prediction(3, 12).unwrap();
        assert_relative_eq!(p.per_generator, 2.0 / 39.0, max_relative = 1e-15);
        assert!(matches!(bloch_variance_prediction(5, 12), Err(Error::NotDivisible { .. })));
        for d in 2..=8u64 {
            for m in 1..=20u64 {
                let n = d * m;
                let p = bloch_variance_prediction(d, n).unwrap();
                assert!((p.cartan_total - p.cartan_count as f64 * p.per_generator).abs() <= 1e-14);
                assert!((p.offdiag_total - p.offdiag_count as f64 * p.per_generator).abs() <= 1e-14);
                let total = 2.0 * ((d + n / d) as f64 / (n as f64 + 1.0) - 1.0 / d as f64);
                assert!((p.total() - total).abs() <= 1e-14);
                assert!((bloch_total_from_purity(d, n).unwrap() - total).abs() <= 1e-14);
            }
        }
    }
}
