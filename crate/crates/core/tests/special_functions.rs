use num_bigint::BigInt;
use proptest::prelude::*;

use typicality::quad::integrate_finite;
use typicality::special_fn::{
    bernoulli_even, digamma, digamma_binet, harmonic, harmonic_range, harmonic_rational, ln_gamma,
    rational_to_f64, reg_incomplete_beta, reg_incomplete_beta_complement, EULER_GAMMA,
};
use typicality::{QuadConfig, Rational};

/// Bernoulli numbers by the Akiyama–Tanigawa algorithm (B_1 = +1/2
/// convention, irrelevant for even indices).
fn akiyama_tanigawa(n: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(n + 1);
    let mut a: Vec<Rational> = Vec::new();
    for m in 0..=n {
        a.push(Rational::new(BigInt::from(1), BigInt::from(m as u64 + 1)));
        for j in (1..=m).rev() {
            let factor = Rational::from_integer(BigInt::from(j as u64));
            a[j - 1] = factor * (&a[j - 1] - &a[j]);
        }
        out.push(a[0].clone());
    }
    out
}

#[test]
fn bernoulli_matches_independent_algorithm() {
    let reference = akiyama_tanigawa(60);
    let ours = bernoulli_even(30).unwrap();
    for k in 1..=30 {
        assert_eq!(ours[k - 1], reference[2 * k], "B_{}", 2 * k);
    }
}

#[test]
fn harmonic_sums_agree_with_exact_rationals() {
    for n in [1u64, 2, 10, 100, 500] {
        let exact = rational_to_f64(&harmonic_rational(n));
        assert!((harmonic(n) - exact).abs() <= 2.0 * f64::EPSILON * exact);
    }
}

#[test]
fn incomplete_beta_against_quadrature() {
    let cfg = QuadConfig::with_abs_tol(1e-12);
    for (a, b) in [(1.0, 1.0), (2.5, 4.0), (6.0, 6.0), (6.0, 30.0), (0.5, 0.5)] {
        let ln_norm = ln_gamma(a + b).unwrap() - ln_gamma(a).unwrap() - ln_gamma(b).unwrap();
        let density = |t: f64| (ln_norm + (a - 1.0) * t.ln() + (b - 1.0) * (-t).ln_1p()).exp();
        for x in [0.05, 0.3, 0.5, 0.9] {
            let q = integrate_finite(density, 0.0, x, &cfg).unwrap();
            let ours = reg_incomplete_beta(x, a, b).unwrap();
            assert!((ours - q.value).abs() < 1e-10, "I_{x}({a},{b}): {ours} vs {}", q.value);
        }
    }
}

#[test]
fn digamma_binet_on_the_integers() {
    for z in 1..=64 {
        let z = z as f64;
        let binet = digamma_binet(z, 1e-12).unwrap();
        assert!((binet - digamma(z + 1.0).unwrap()).abs() < 1e-9);
    }
}

proptest! {
    #[test]
    fn digamma_recurrence(x in 0.05f64..200.0) {
        let lhs = digamma(x + 1.0).unwrap();
        let rhs = digamma(x).unwrap() + 1.0 / x;
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
    }

    #[test]
    fn digamma_is_harmonic_on_integers(n in 1u64..20_000) {
        let d = digamma(n as f64 + 1.0).unwrap();
        prop_assert!((d - (harmonic(n) - EULER_GAMMA)).abs() <= 1e-12);
    }

    #[test]
    fn harmonic_range_is_a_difference(lo in 0u64..5000, len in 0u64..5000) {
        let hi = lo + len;
        let direct = harmonic(hi) - harmonic(lo);
        prop_assert!((harmonic_range(lo, hi) - direct).abs() <= 1e-13 * harmonic(hi).max(1.0));
        prop_assert_eq!(harmonic_range(hi, lo), -harmonic_range(lo, hi));
    }

    #[test]
    fn incomplete_beta_reflection(x in 0.001f64..0.999, a in 0.2f64..40.0, b in 0.2f64..40.0) {
        let lhs = reg_incomplete_beta(x, a, b).unwrap();
        let rhs = reg_incomplete_beta_complement(1.0 - x, b, a).unwrap();
        prop_assert!((lhs - rhs).abs() <= 1e-13);
        let sum = lhs + reg_incomplete_beta_complement(x, a, b).unwrap();
        prop_assert!((sum - 1.0).abs() <= 1e-13);
    }

    #[test]
    fn ln_gamma_recurrence(x in 0.1f64..150.0) {
        let lhs = ln_gamma(x + 1.0).unwrap();
        let rhs = ln_gamma(x).unwrap() + x.ln();
        prop_assert!((lhs - rhs).abs() <= 1e-12 * lhs.abs().max(1.0));
    }
}
