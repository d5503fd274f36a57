//! Typical mutual information `⟨I(A:B)⟩` of a Haar-random pure state on
//! `C^{d_A} ⊗ C^{d_B} ⊗ C^{d_E}`, in three equivalent forms:
//!
//! * exact: harmonic-number combination plus a rational eigenvalue
//!   correction, from Page's formula applied to `A`, `B` and `AB`;
//! * asymptotic: `(d_A²−1)(d_B²−1)/(2N) − Σ_k B_{2k}/(2k N^{2k}) (d_A^{2k}−1)(d_B^{2k}−1)`,
//!   or equivalently with `ζ(1−2k)` coefficients;
//! * integral: `(d_A²−1)(d_B²−1) [1/(2N) − 2J]` with `J` a Bose–Einstein
//!   weighted integral of a rational function, which also folds onto the
//!   finite interval `[0, √(d_A d_B)]` with a strictly positive integrand.
//!
//! The asymptotic and integral forms require the Page regime
//! `d_A d_B <= d_E`. The exact form is valid everywhere: outside the
//! regime Page's formula for `S(AB)` is evaluated with the roles of `AB`
//! and `E` exchanged.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::dims::TripartiteDims;
use crate::error::{Error, Result};
use crate::quad::{self, QuadConfig, QuadResult};
use crate::special_fn::{
    bernoulli_2k, harmonic_range, rational_to_f64, zeta_negative_odd,
    CompensatedSum, BERNOULLI_K_MAX,
};
use crate::spectral::{page_entropy, page_entropy_exact, EntropySplit, EntropySplitExact};
use crate::Rational;

/// Default absolute tolerance for the integral forms.
pub const DEFAULT_TOL: f64 = 1e-12;

/// Diagonal (classical) and eigenvalue (coherence) parts of `⟨I(A:B)⟩`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MIDecomposition {
    pub diagonal_mi: f64,
    pub eigenvalue_correction: f64,
    pub total: f64,
    /// `(d_A²−1)(d_B²−1)/(2N)`
    pub coherence_term: f64,
    /// `(d_A−1)(d_B−1)/(2N)`
    pub cartan_term: f64,
}

/// A truncated asymptotic series for `⟨I(A:B)⟩`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SeriesEvaluation {
    pub order_k: usize,
    pub leading: f64,
    pub value: f64,
    /// Signed values of terms `k = 1..=order_k`.
    pub terms: Vec<f64>,
    /// `|term_{order_k + 1}|`
    pub truncation_estimate: f64,
    /// Exact coefficients `ζ(1−2k) = −B_{2k}/(2k)` multiplying
    /// `(d_A^{2k}−1)(d_B^{2k}−1)/N^{2k}`.
    #[serde(skip)]
    pub coefficients: Vec<Rational>,
}

fn require_page_regime(dims: TripartiteDims) -> Result<()> {
    if dims.page_regime() {
        Ok(())
    } else {
        Err(Error::Regime {
            d_ab: dims.d_ab(),
            d_e: dims.d_e(),
        })
    }
}

// A and B ordered so that d_A <= d_B; every form is symmetric under the
// exchange and evaluating one canonical order makes that symmetry exact
// in floating point too.
fn canonical(dims: TripartiteDims) -> TripartiteDims {
    if dims.d_a() <= dims.d_b() {
        dims
    } else {
        dims.swapped_ab()
    }
}

/// Page entropy of a subsystem of dimension `d_x` inside a total space of
/// dimension `n`, with the smaller factor passed as the subsystem.
fn ordered_page(d_x: u64, n: u64) -> Result<EntropySplit> {
    let d_rest = n / d_x;
    page_entropy(d_x.min(d_rest), d_x.max(d_rest))
}

fn ordered_page_exact(d_x: u64, n: u64) -> Result<EntropySplitExact> {
    let d_rest = n / d_x;
    page_entropy_exact(d_x.min(d_rest), d_x.max(d_rest))
}

fn coherence_and_cartan(dims: TripartiteDims) -> (f64, f64) {
    let (a, b) = (dims.d_a() as f64, dims.d_b() as f64);
    let two_n = 2.0 * dims.n() as f64;
    ((a * a - 1.0) * (b * b - 1.0) / two_n, (a - 1.0) * (b - 1.0) / two_n)
}

/// `H_N − H_{N/d_A} − H_{N/d_B} + H_{N/(d_A d_B)}`: the mutual information
/// of the diagonal (computational-basis) distributions.
fn diagonal_mi(dims: TripartiteDims) -> f64 {
    let d = canonical(dims);
    let n = d.n();
    harmonic_range(n / d.d_a(), n) - harmonic_range(n / d.d_ab(), n / d.d_b())
}

/// Exact typical mutual information with its diagonal/eigenvalue split.
///
/// In the Page regime the eigenvalue correction is the rational
/// `[(d_A²−1)(d_B²−1) − (d_A−1)(d_B−1)]/(2N)`. Outside it the total comes
/// from Page's formula with `S(AB)` evaluated as `S(E)`, and the eigenvalue
/// correction is whatever separates that total from the diagonal part.
pub fn mi_exact(dims: TripartiteDims) -> MIDecomposition {
    let d = canonical(dims);
    let (coherence_term, cartan_term) = coherence_and_cartan(d);
    let diagonal = diagonal_mi(d);
    if d.page_regime() {
        let correction = coherence_term - cartan_term;
        return MIDecomposition {
            diagonal_mi: diagonal,
            eigenvalue_correction: correction,
            total: diagonal + correction,
            coherence_term,
            cartan_term,
        };
    }
    let n = d.n();
    let entropy = |d_x: u64| ordered_page(d_x, n).expect("ordered arguments").von_neumann;
    let total = entropy(d.d_a()) + entropy(d.d_b()) - entropy(d.d_ab());
    MIDecomposition {
        diagonal_mi: diagonal,
        eigenvalue_correction: total - diagonal,
        total,
        coherence_term,
        cartan_term,
    }
}

/// `⟨S(A)⟩ + ⟨S(B)⟩ − ⟨S(AB)⟩` in exact rational arithmetic, valid in and
/// out of the Page regime.
pub fn mi_exact_rational(dims: TripartiteDims) -> Rational {
    let n = dims.n();
    let entropy = |d_x: u64| ordered_page_exact(d_x, n).expect("ordered arguments").von_neumann();
    entropy(dims.d_a()) + entropy(dims.d_b()) - entropy(dims.d_ab())
}

/// The harmonic form with the unswapped rational correction, evaluated
/// regardless of regime. Agrees with [`mi_exact`] in the Page regime only.
pub fn mi_naive_factorized(dims: TripartiteDims) -> f64 {
    let d = canonical(dims);
    let (coherence, cartan) = coherence_and_cartan(d);
    diagonal_mi(d) + (coherence - cartan)
}

/// Leading term `(d_A²−1)(d_B²−1)/(2N)`.
pub fn mi_leading(dims: TripartiteDims) -> Result<f64> {
    require_page_regime(dims)?;
    Ok(coherence_and_cartan(dims).0)
}

/// `(d^{2k} − 1)` as an exact integer.
fn even_power_minus_one(d: u64, k: usize) -> BigInt {
    BigInt::from(d).pow(2 * k as u32) - BigInt::one()
}

/// `(d_A^{2k}−1) + (d_B^{2k}−1) − (d_A^{2k} d_B^{2k} − 1)`, which equals
/// `−(d_A^{2k}−1)(d_B^{2k}−1)`.
pub fn collapse_identity(d_a: u64, d_b: u64, k: usize) -> BigInt {
    even_power_minus_one(d_a, k) + even_power_minus_one(d_b, k) - even_power_minus_one(d_a * d_b, k)
}

/// Exact `k`-th series term `ζ(1−2k) (d_A^{2k}−1)(d_B^{2k}−1) / N^{2k}`,
/// for `1 <= k <= 65`.
pub fn series_term_exact(dims: TripartiteDims, k: usize) -> Result<Rational> {
    let coefficient = zeta_negative_odd(k)?;
    Ok(term_from_coefficient(dims, k, &coefficient))
}

fn term_from_coefficient(dims: TripartiteDims, k: usize, coefficient: &Rational) -> Rational {
    let factor = even_power_minus_one(dims.d_a(), k) * even_power_minus_one(dims.d_b(), k);
    let denom = BigInt::from(dims.n()).pow(2 * k as u32);
    coefficient * Rational::new(factor, denom)
}

/// Leading term as an exact rational.
pub fn mi_leading_exact(dims: TripartiteDims) -> Rational {
    let a = BigInt::from(dims.d_a());
    let b = BigInt::from(dims.d_b());
    Rational::new(
        (&a * &a - 1) * (&b * &b - 1),
        BigInt::from(2 * dims.n()),
    )
}

/// Exact partial sum of the series through `k_terms`.
pub fn series_partial_sum_exact(dims: TripartiteDims, k_terms: usize) -> Result<Rational> {
    check_series_args(dims, k_terms)?;
    let mut sum = mi_leading_exact(dims);
    for k in 1..=k_terms {
        sum += series_term_exact(dims, k)?;
    }
    Ok(sum)
}

fn check_series_args(dims: TripartiteDims, k_terms: usize) -> Result<()> {
    require_page_regime(dims)?;
    if k_terms > BERNOULLI_K_MAX {
        return Err(crate::error::domain(
            "mutual_info series",
            format!("k_terms must be at most {BERNOULLI_K_MAX}, got {k_terms}"),
        ));
    }
    Ok(())
}

fn evaluate_series(
    dims: TripartiteDims,
    k_terms: usize,
    coefficient: impl Fn(usize) -> Result<Rational>,
) -> Result<SeriesEvaluation> {
    check_series_args(dims, k_terms)?;
    let leading = coherence_and_cartan(dims).0;
    let mut coefficients = Vec::with_capacity(k_terms);
    let mut terms = Vec::with_capacity(k_terms);
    let mut sum = CompensatedSum::default();
    sum.add(leading);
    for k in 1..=k_terms {
        let c = coefficient(k)?;
        let t = rational_to_f64(&term_from_coefficient(dims, k, &c));
        sum.add(t);
        terms.push(t);
        coefficients.push(c);
    }
    let next = coefficient(k_terms + 1)?;
    let truncation_estimate = rational_to_f64(&term_from_coefficient(dims, k_terms + 1, &next)).abs();
    Ok(SeriesEvaluation {
        order_k: k_terms,
        leading,
        value: sum.value(),
        terms,
        truncation_estimate,
        coefficients,
    })
}

/// Bernoulli-number form: coefficients `−B_{2k}/(2k)`.
pub fn mi_bernoulli_series(dims: TripartiteDims, k_terms: usize) -> Result<SeriesEvaluation> {
    evaluate_series(dims, k_terms, |k| {
        Ok(-bernoulli_2k(k) / Rational::from_integer(BigInt::from(2 * k)))
    })
}

/// Zeta form: coefficients `ζ(1−2k)`.
pub fn mi_zeta_series(dims: TripartiteDims, k_terms: usize) -> Result<SeriesEvaluation> {
    evaluate_series(dims, k_terms, zeta_negative_odd)
}

/// Index `k*` in `1..=64` of the smallest series term (superasymptotic
/// truncation point).
pub fn optimal_truncation_order(dims: TripartiteDims) -> Result<usize> {
    require_page_regime(dims)?;
    let mut best = (1, None::<Rational>);
    for k in 1..=BERNOULLI_K_MAX {
        let t = series_term_exact(dims, k)?.abs();
        if best.1.as_ref().map_or(true, |b| t < *b) {
            best = (k, Some(t));
        }
    }
    Ok(best.0)
}

/// Rational part of the eigenvalue correction, assembled per subsystem
/// and as the coherence-minus-Cartan difference.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalDelta {
    pub assembled: Rational,
    pub coherence: Rational,
    pub cartan: Rational,
}

/// `−d_A(d_A−1)/(2N) − d_B(d_B−1)/(2N) + d_A d_B(d_A d_B−1)/(2N)`, which
/// equals `(d_A²−1)(d_B²−1)/(2N) − (d_A−1)(d_B−1)/(2N)`.
pub fn rational_delta(d_a: u64, d_b: u64, n: u64) -> Result<RationalDelta> {
    if d_a == 0 || d_b == 0 || n == 0 || n % (d_a * d_b) != 0 {
        return Err(Error::NotDivisible {
            what: "total dimension N",
            value: n,
            divisor: d_a * d_b,
        });
    }
    let two_n = BigInt::from(2 * n);
    let frac = |num: BigInt| Rational::new(num, two_n.clone());
    let (a, b) = (BigInt::from(d_a), BigInt::from(d_b));
    let ab = &a * &b;
    let one = BigInt::from(1);
    let assembled = frac(-(&a * (&a - &one))) + frac(-(&b * (&b - &one))) + frac(&ab * (&ab - &one));
    let coherence = frac((&a * &a - &one) * (&b * &b - &one));
    let cartan = frac((&a - &one) * (&b - &one));
    Ok(RationalDelta {
        assembled,
        coherence,
        cartan,
    })
}

/// Bose–Einstein kernel `1/(e^{2π x d_E} − 1)`.
pub fn bose_einstein_kernel(x: f64, d_e: u64) -> f64 {
    1.0 / (2.0 * std::f64::consts::PI * x * d_e as f64).exp_m1()
}

/// `R(u) = u(C² − u⁴) / [(u²+1)(u²+d_A²)(u²+d_B²)(u²+C²)]`, `C = d_A d_B`.
pub fn rational_integrand(d_a: u64, d_b: u64, u: f64) -> f64 {
    let (a2, b2) = ((d_a * d_a) as f64, (d_b * d_b) as f64);
    let c = (d_a * d_b) as f64;
    let u2 = u * u;
    // c² − u⁴ = (c − u²)(c + u²); the fused c − u·u keeps the zero at
    // u = √c accurate.
    let numerator = (-u).mul_add(u, c) * (c + u2);
    u * numerator / ((u2 + 1.0) * (u2 + a2) * (u2 + b2) * (u2 + c * c))
}

// R(u) f(u) near u = 0 tends to 1/(2π d_E C²).
fn small_u_limit(dims: TripartiteDims) -> f64 {
    let c = dims.d_ab() as f64;
    1.0 / (2.0 * std::f64::consts::PI * dims.d_e() as f64 * c * c)
}

fn j_integrand(dims: TripartiteDims) -> impl Fn(f64) -> f64 {
    let limit = small_u_limit(dims);
    move |u: f64| {
        if u == 0.0 {
            return limit;
        }
        rational_integrand(dims.d_a(), dims.d_b(), u) * bose_einstein_kernel(u, dims.d_e())
    }
}

/// The folded integrand `R(u)[f(u) − f(C/u)]` on `[0, √C]`.
pub fn folded_integrand(dims: TripartiteDims) -> Result<impl Fn(f64) -> f64> {
    require_page_regime(dims)?;
    let d = canonical(dims);
    let limit = small_u_limit(d);
    let c = d.d_ab() as f64;
    Ok(move |u: f64| {
        if u == 0.0 {
            return limit;
        }
        let mirror = c / u;
        rational_integrand(d.d_a(), d.d_b(), u)
            * (bose_einstein_kernel(u, d.d_e()) - bose_einstein_kernel(mirror, d.d_e()))
    })
}

// ln[1/(e^x − 1)] without overflow.
fn ln_bose_einstein(x: f64) -> f64 {
    if x < 1.0 {
        -x.exp_m1().ln()
    } else {
        -x - (-(-x).exp()).ln_1p()
    }
}

/// Natural log of the folded integrand on `(0, √C)`. The integrand itself
/// underflows to zero near `√C` once `d_E` is large; its logarithm stays
/// finite wherever the integrand is positive, and is NaN or `−∞` otherwise.
pub fn ln_folded_integrand(dims: TripartiteDims) -> Result<impl Fn(f64) -> f64> {
    require_page_regime(dims)?;
    let d = canonical(dims);
    let (a2, b2) = ((d.d_a() * d.d_a()) as f64, (d.d_b() * d.d_b()) as f64);
    let c = d.d_ab() as f64;
    let rate = 2.0 * std::f64::consts::PI * d.d_e() as f64;
    Ok(move |u: f64| {
        let u2 = u * u;
        let ln_r = u.ln() + (-u).mul_add(u, c).ln() + (c + u2).ln()
            - (u2 + 1.0).ln()
            - (u2 + a2).ln()
            - (u2 + b2).ln()
            - (u2 + c * c).ln();
        let ln_near = ln_bose_einstein(rate * u);
        let ln_far = ln_bose_einstein(rate * c / u);
        ln_r + ln_near + (-(ln_far - ln_near).exp_m1()).ln()
    })
}

/// `J = ∫₀^∞ R(u) / (e^{2π u d_E} − 1) du` on the semi-infinite line.
pub fn bose_einstein_j(dims: TripartiteDims, tol: f64) -> Result<QuadResult> {
    require_page_regime(dims)?;
    let d = canonical(dims);
    let rate = 2.0 * std::f64::consts::PI * d.d_e() as f64;
    quad::integrate_decaying(j_integrand(d), 0.0, rate, &QuadConfig::with_abs_tol(tol))
}

/// `J` folded onto `[0, √(d_A d_B)]`; the production path.
pub fn bose_einstein_j_folded(dims: TripartiteDims, tol: f64) -> Result<QuadResult> {
    let integrand = folded_integrand(dims)?;
    let upper = (dims.d_ab() as f64).sqrt();
    quad::integrate_finite(integrand, 0.0, upper, &QuadConfig::with_abs_tol(tol))
}

/// `G = 1/(2N) − 2J`, so that `⟨I(A:B)⟩ = (d_A²−1)(d_B²−1) G`.
pub fn factor_g(dims: TripartiteDims, tol: f64) -> Result<f64> {
    let j = bose_einstein_j_folded(canonical(dims), tol / 2.0)?;
    Ok(0.5 / dims.n() as f64 - 2.0 * j.value)
}

/// Closed-form integral representation of `⟨I(A:B)⟩`. The accuracy of
/// `J` is scaled so that the returned value meets `tol` absolutely.
pub fn mi_closed_form(dims: TripartiteDims, tol: f64) -> Result<QuadResult> {
    require_page_regime(dims)?;
    let d = canonical(dims);
    let prefactor = ((d.d_a() * d.d_a() - 1) * (d.d_b() * d.d_b() - 1)) as f64;
    let j_tol = if prefactor > 0.0 { tol / (2.0 * prefactor) } else { tol };
    let j = bose_einstein_j_folded(d, j_tol)?;
    Ok(QuadResult {
        value: prefactor * (0.5 / d.n() as f64 - 2.0 * j.value),
        abs_error_estimate: 2.0 * prefactor * j.abs_error_estimate,
        evaluations: j.evaluations,
        subdivisions: j.subdivisions,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PartialFractionCheck {
    /// `R(u)` from the production integrand.
    pub lhs: f64,
    /// The partial-fraction sum, evaluated exactly at the binary value of
    /// `u` and rounded once. Its four terms cancel near the zero of `R` at
    /// `u = √(d_A d_B)`, so a floating evaluation would lose all relative
    /// accuracy there.
    pub rhs: f64,
}

impl PartialFractionCheck {
    pub fn relative_error(&self) -> f64 {
        if self.rhs == 0.0 {
            self.lhs.abs()
        } else {
            ((self.lhs - self.rhs) / self.rhs).abs()
        }
    }
}

/// Evaluates both sides of
/// `R(u) = [u/(u²+1) − u/(u²+d_A²) − u/(u²+d_B²) + u/(u²+d_A²d_B²)] / [(d_A²−1)(d_B²−1)]`.
pub fn partial_fraction_check(d_a: u64, d_b: u64, u: f64) -> Result<PartialFractionCheck> {
    if d_a < 2 || d_b < 2 || !(u > 0.0 && u.is_finite()) {
        return Err(crate::error::domain(
            "partial_fraction_check",
            format!("need d_A, d_B >= 2 and finite u > 0, got ({d_a}, {d_b}, {u})"),
        ));
    }
    let ur = Rational::from_float(u).expect("finite u");
    let u2 = &ur * &ur;
    let sq = |d: u64| Rational::from_integer(BigInt::from(d * d));
    let (a2, b2, c2) = (sq(d_a), sq(d_b), sq(d_a * d_b));
    let one = Rational::one();
    let term = |shift: &Rational| &ur / (&u2 + shift);
    let sum = term(&one) - term(&a2) - term(&b2) + term(&c2);
    let rhs = sum / ((&a2 - &one) * (&b2 - &one));
    Ok(PartialFractionCheck {
        lhs: rational_integrand(d_a, d_b, u),
        rhs: rational_to_f64(&rhs),
    })
}

/// True when `mi_exact_rational(dims)` is exactly zero.
pub fn vanishes_exactly(dims: TripartiteDims) -> bool {
    mi_exact_rational(dims).is_zero()
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn t(a: u64, b: u64, e: u64) -> TripartiteDims {
        TripartiteDims::new(a, b, e).unwrap()
    }

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn two_qubit_reference() {
        let m = mi_exact(t(2, 2, 4));
        assert!((m.total - 0.278348).abs() < 5e-7, "{}", m.total);
        assert_relative_eq!(m.coherence_term, 9.0 / 32.0);
        assert_relative_eq!(m.cartan_term, 1.0 / 32.0);
        assert_relative_eq!(m.eigenvalue_correction, 0.25);
        assert_relative_eq!(rational_to_f64(&mi_exact_rational(t(2, 2, 4))), m.total, max_relative = 1e-14);
        assert_eq!(mi_leading(t(2, 2, 4)).unwrap(), 9.0 / 32.0);
    }

    #[test]
    fn failure_regime_reference() {
        let m = mi_exact(t(3, 4, 2));
        assert!((m.total - 1.378).abs() < 1e-3, "{}", m.total);
        assert!((mi_naive_factorized(t(3, 4, 2)) - 2.483).abs() < 1e-3);
        assert_relative_eq!(rational_to_f64(&mi_exact_rational(t(3, 4, 2))), m.total, max_relative = 1e-13);
        assert!((m.diagonal_mi + m.eigenvalue_correction - m.total).abs() < 1e-13);
        assert!(matches!(mi_leading(t(3, 4, 2)), Err(Error::Regime { d_ab: 12, d_e: 2 })));
    }

    #[test]
    fn naive_form_agrees_in_page_regime() {
        for (a, b, e) in [(2, 2, 4), (2, 3, 8), (3, 3, 9), (4, 2, 64)] {
            assert_eq!(mi_naive_factorized(t(a, b, e)), mi_exact(t(a, b, e)).total);
        }
        assert_eq!(mi_naive_factorized(t(1, 1, 5)), 0.0);
    }

    #[test]
    fn trivial_subsystems_vanish() {
        for (a, b, e) in [(1, 3, 5), (4, 1, 2), (1, 1, 1), (1, 7, 3)] {
            assert_eq!(mi_exact(t(a, b, e)).total, 0.0);
            assert!(vanishes_exactly(t(a, b, e)));
        }
        assert_eq!(mi_leading(t(1, 3, 5)).unwrap(), 0.0);
    }

    #[test]
    fn leading_values() {
        assert_relative_eq!(mi_leading(t(2, 3, 8)).unwrap(), 0.25);
    }

    #[test]
    fn series_low_orders() {
        let s = mi_bernoulli_series(t(2, 2, 4), 1).unwrap();
        assert_relative_eq!(s.value, 0.28125 - 9.0 / (12.0 * 256.0), max_relative = 1e-15);
        let s2 = mi_bernoulli_series(t(2, 2, 4), 2).unwrap();
        assert_relative_eq!(
            s2.value,
            0.28125 - 9.0 / (12.0 * 256.0) + 225.0 / (120.0 * 16f64.powi(4)),
            max_relative = 1e-15
        );
        assert!((s2.value - mi_exact(t(2, 2, 4)).total).abs() < 2e-6);
        let s0 = mi_bernoulli_series(t(2, 2, 4), 0).unwrap();
        assert_eq!(s0.value, mi_leading(t(2, 2, 4)).unwrap());
        assert!(s0.terms.is_empty());
        assert!(mi_bernoulli_series(t(3, 4, 2), 1).is_err());
        assert!(mi_bernoulli_series(t(2, 2, 4), 65).is_err());
    }

    #[test]
    fn zeta_and_bernoulli_forms_are_identical() {
        for (dims, k) in [(t(2, 2, 4), 1), (t(2, 2, 16), 3), (t(3, 2, 12), 20), (t(2, 2, 4), 0)] {
            let b = mi_bernoulli_series(dims, k).unwrap();
            let z = mi_zeta_series(dims, k).unwrap();
            assert_eq!(b, z);
        }
    }

    #[test]
    fn series_coefficients_are_the_published_rationals() {
        let s = mi_zeta_series(t(2, 2, 16), 5).unwrap();
        let expected = [q(-1, 12), q(1, 120), q(-1, 252), q(1, 240), q(-1, 132)];
        assert_eq!(s.coefficients, expected);
    }

    #[test]
    fn collapse_identity_examples() {
        assert_eq!(collapse_identity(2, 2, 1), BigInt::from(-9));
        assert_eq!(collapse_identity(1, 7, 4), BigInt::zero());
        assert_eq!(collapse_identity(3, 4, 2), BigInt::from(-20400));
    }

    #[test]
    fn rational_delta_examples() {
        let r = rational_delta(2, 2, 16).unwrap();
        assert_eq!(r.assembled, q(1, 4));
        assert_eq!(&r.coherence - &r.cartan, q(1, 4));
        assert_eq!(r.coherence, q(9, 32));
        let r = rational_delta(1, 5, 25).unwrap();
        assert!(r.assembled.is_zero());
        let r = rational_delta(3, 4, 24).unwrap();
        assert_eq!(r.assembled, q(114, 48));
        assert!(rational_delta(3, 4, 25).is_err());
    }

    #[test]
    fn partial_fraction_examples() {
        // R(1) for d_A = d_B = 2: 1·(16 − 1)/(2·5·5·17)
        let c = partial_fraction_check(2, 2, 1.0).unwrap();
        assert!((c.lhs - 15.0 / 850.0).abs() < 1e-17);
        assert!(c.relative_error() < 1e-15);
        let c = partial_fraction_check(2, 3, 6f64.sqrt()).unwrap();
        assert!(c.lhs.abs() < 1e-15 && c.rhs.abs() < 1e-15);
        let c = partial_fraction_check(3, 4, 0.5).unwrap();
        assert!(c.relative_error() < 1e-14);
        // just off the zero of R, where a floating partial-fraction sum fails
        let c = partial_fraction_check(5, 2, 3.1623480048948944).unwrap();
        assert!(c.relative_error() < 1e-13);
        assert!(partial_fraction_check(1, 4, 0.5).is_err());
        assert!(partial_fraction_check(2, 4, 0.0).is_err());
    }

    #[test]
    fn j_for_two_qubits() {
        let dims = t(2, 2, 4);
        let exact = mi_exact(dims).total;
        let expected = (1.0 / 32.0 - exact / 9.0) / 2.0;
        let semi = bose_einstein_j(dims, 1e-14).unwrap();
        let folded = bose_einstein_j_folded(dims, 1e-14).unwrap();
        assert!((semi.value - expected).abs() < 1e-13, "{} vs {}", semi.value, expected);
        assert!((folded.value - expected).abs() < 1e-13);
        assert!((semi.value - 1.612e-4).abs() < 1e-6);
        assert!(semi.value > 0.0);
        let far = bose_einstein_j(t(2, 2, 64), 1e-14).unwrap();
        assert!(far.value > 0.0 && far.value < semi.value);
        assert!(bose_einstein_j(t(3, 4, 2), 1e-12).is_err());
    }

    #[test]
    fn folded_integrand_shape() {
        let f = folded_integrand(t(2, 3, 8)).unwrap();
        let upper = 6f64.sqrt();
        // the two kernel terms cancel where the fold meets itself
        assert!(f(upper).abs() < 1e-12 * f(upper / 2.0));
        for i in 1..=100 {
            let u = upper * i as f64 / 101.0;
            assert!(f(u) > 0.0, "u = {u}");
        }
    }

    #[test]
    fn log_folded_integrand_matches_and_survives_underflow() {
        let dims = t(2, 3, 8);
        let f = folded_integrand(dims).unwrap();
        let ln_f = ln_folded_integrand(dims).unwrap();
        for u in [1e-3, 0.1, 0.7, 1.5, 2.4] {
            assert!((ln_f(u) - f(u).ln()).abs() < 1e-10, "u = {u}");
        }
        let big = t(4, 4, 64);
        let f = folded_integrand(big).unwrap();
        let ln_f = ln_folded_integrand(big).unwrap();
        assert_eq!(f(3.9), 0.0);
        assert!(ln_f(3.9).is_finite() && ln_f(3.9) < -700.0);
    }

    #[test]
    fn closed_form_matches_exact() {
        for (a, b, e) in [(2, 2, 4), (2, 3, 8), (1, 3, 5)] {
            let dims = t(a, b, e);
            let c = mi_closed_form(dims, 1e-12).unwrap();
            let exact = mi_exact(dims).total;
            assert!((c.value - exact).abs() <= 1e-11, "{dims:?}: {} vs {}", c.value, exact);
        }
        assert_eq!(mi_closed_form(t(1, 3, 5), 1e-12).unwrap().value, 0.0);
        assert!(matches!(mi_closed_form(t(3, 4, 2), 1e-12), Err(Error::Regime { .. })));
    }

    #[test]
    fn factor_g_values() {
        let g = factor_g(t(2, 2, 4), 1e-13).unwrap();
        assert!((g - 0.278348040848 / 9.0).abs() < 1e-10);
        let g64 = factor_g(t(2, 2, 64), 1e-13).unwrap();
        assert!(g64 < 1.0 / (2.0 * 256.0));
        assert_eq!(factor_g(t(2, 3, 8), 1e-12).unwrap(), factor_g(t(3, 2, 8), 1e-12).unwrap());
    }

    #[test]
    fn optimal_truncation_two_qubits() {
        let k = optimal_truncation_order(t(2, 2, 4)).unwrap();
        assert!((2..64).contains(&k), "{k}");
        let term = |k| rational_to_f64(&series_term_exact(t(2, 2, 4), k).unwrap()).abs();
        assert!(term(k) <= term(k - 1) && term(k) <= term(k + 1));
    }
}
