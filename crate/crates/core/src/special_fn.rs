//! Special functions: harmonic numbers, digamma (direct and via Binet's
//! integral), log-gamma, exact even Bernoulli numbers, the regularized
//! incomplete beta function and the Gaussian complementary error function.

use std::sync::OnceLock;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Result};
use crate::quad::{self, QuadConfig};
use crate::Rational;

/// Euler–Mascheroni constant, 20 significant digits.
#[allow(clippy::excessive_precision)]
pub const EULER_GAMMA: f64 = 0.577_215_664_901_532_860_61;

/// Largest index accepted by [`bernoulli_even`].
pub const BERNOULLI_K_MAX: usize = 64;

// One entry beyond the public limit so that series truncated at k = 64 can
// still report the first omitted term.
const BERNOULLI_TABLE_LEN: usize = BERNOULLI_K_MAX + 1;

/// Neumaier-compensated running sum.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub(crate) fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub(crate) fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

/// A harmonic number `H_n` together with its index.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct HarmonicValue {
    pub index: u64,
    pub value: f64,
}

impl HarmonicValue {
    pub fn new(index: u64) -> Self {
        Self {
            index,
            value: harmonic(index),
        }
    }
}

/// `H_n = 1 + 1/2 + ... + 1/n`, with `H_0 = 0`.
pub fn harmonic(n: u64) -> f64 {
    harmonic_range(0, n)
}

/// `H_hi - H_lo`, summed directly over `lo < j <= hi` so that the
/// difference of two large harmonic numbers keeps full relative precision.
/// Antisymmetric in its arguments.
pub fn harmonic_range(lo: u64, hi: u64) -> f64 {
    if hi < lo {
        return -harmonic_range(hi, lo);
    }
    let mut acc = CompensatedSum::default();
    // smallest terms first
    for j in (lo + 1..=hi).rev() {
        acc.add(1.0 / j as f64);
    }
    acc.value()
}

/// `H_n` as an exact rational.
pub fn harmonic_rational(n: u64) -> Rational {
    harmonic_range_rational(0, n)
}

/// `H_hi - H_lo` as an exact rational.
pub fn harmonic_range_rational(lo: u64, hi: u64) -> Rational {
    if hi < lo {
        return -harmonic_range_rational(hi, lo);
    }
    // Accumulate over a common denominator and reduce once at the end.
    let mut num = BigInt::zero();
    let mut den = BigInt::one();
    for j in lo + 1..=hi {
        let j = BigInt::from(j);
        num = num * &j + &den;
        den *= j;
        if den.bits() > 4096 {
            let r = Rational::new(num, den);
            num = r.numer().clone();
            den = r.denom().clone();
        }
    }
    Rational::new(num, den)
}

/// Digamma function ψ(x) for real `x > 0`.
///
/// Shifts the argument upward to `x >= 8` with ψ(x) = ψ(x+1) − 1/x and
/// finishes with the Stirling-type tail through `B_14`.
pub fn digamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain("digamma", format!("argument must be positive, got {x}")));
    }
    let mut shift = CompensatedSum::default();
    let mut z = x;
    while z < 8.0 {
        shift.add(-1.0 / z);
        z += 1.0;
    }
    // B_{2k} / (2k) for k = 1..7
    const TAIL: [f64; 7] = [
        1.0 / 12.0,
        -1.0 / 120.0,
        1.0 / 252.0,
        -1.0 / 240.0,
        1.0 / 132.0,
        -691.0 / 32760.0,
        1.0 / 12.0,
    ];
    let inv2 = 1.0 / (z * z);
    let mut poly = 0.0;
    for c in TAIL.iter().rev() {
        poly = (poly + c) * inv2;
    }
    let tail = z.ln() - 0.5 / z - poly;
    shift.add(tail);
    Ok(shift.value())
}

/// ψ(z+1) from Binet's second formula,
///
/// ψ(z+1) = ln z + 1/(2z) − 2 ∫₀^∞ t dt / [(t² + z²)(e^{2πt} − 1)],
///
/// with the integral evaluated to absolute accuracy `tol / 2`.
pub fn digamma_binet(z: f64, tol: f64) -> Result<f64> {
    if !(z > 0.0) || !z.is_finite() {
        return Err(domain("digamma_binet", format!("argument must be positive, got {z}")));
    }
    if !(tol > 0.0) {
        return Err(domain("digamma_binet", format!("tolerance must be positive, got {tol}")));
    }
    let z2 = z * z;
    let integrand = move |t: f64| {
        if t == 0.0 {
            return 0.0;
        }
        t / ((t * t + z2) * (2.0 * std::f64::consts::PI * t).exp_m1())
    };
    let cfg = QuadConfig::with_abs_tol(0.5 * tol);
    let integral = quad::integrate_decaying(integrand, 0.0, 2.0 * std::f64::consts::PI, &cfg)?;
    Ok(z.ln() + 0.5 / z - 2.0 * integral.value)
}

fn bernoulli_table() -> &'static [Rational] {
    static TABLE: OnceLock<Vec<Rational>> = OnceLock::new();
    TABLE.get_or_init(|| compute_bernoulli_even(BERNOULLI_TABLE_LEN))
}

/// `[B_2, B_4, ..., B_{2 k_max}]` from Σ_{j=0}^{m} C(m+1, j) B_j = 0.
fn compute_bernoulli_even(k_max: usize) -> Vec<Rational> {
    let m_max = 2 * k_max;
    // b[j] holds B_j; odd indices above 1 vanish and are skipped.
    let mut b: Vec<Rational> = vec![Rational::zero(); m_max + 1];
    b[0] = Rational::one();
    if m_max >= 1 {
        b[1] = Rational::new(BigInt::from(-1), BigInt::from(2));
    }
    // binom holds row m+1 of Pascal's triangle
    let mut binom: Vec<BigInt> = vec![BigInt::one(), BigInt::from(2), BigInt::one()];
    for m in 2..=m_max {
        let mut next = Vec::with_capacity(binom.len() + 1);
        next.push(BigInt::one());
        for w in binom.windows(2) {
            next.push(&w[0] + &w[1]);
        }
        next.push(BigInt::one());
        binom = next;
        if m % 2 == 1 {
            continue;
        }
        let mut acc = Rational::zero();
        for (j, bj) in b.iter().enumerate().take(m) {
            if bj.is_zero() {
                continue;
            }
            acc += Rational::from_integer(binom[j].clone()) * bj;
        }
        b[m] = -acc / Rational::from_integer(BigInt::from(m + 1));
    }
    (1..=k_max).map(|k| b[2 * k].clone()).collect()
}

/// Even Bernoulli numbers `[B_2, ..., B_{2 k_max}]` as exact rationals,
/// for `1 <= k_max <= 64`.
pub fn bernoulli_even(k_max: usize) -> Result<Vec<Rational>> {
    if !(1..=BERNOULLI_K_MAX).contains(&k_max) {
        return Err(domain(
            "bernoulli_even",
            format!("k_max must lie in 1..={BERNOULLI_K_MAX}, got {k_max}"),
        ));
    }
    Ok(bernoulli_table()[..k_max].to_vec())
}

/// `B_{2k}` for `1 <= k <= 65` (one past the public limit).
pub(crate) fn bernoulli_2k(k: usize) -> &'static Rational {
    &bernoulli_table()[k - 1]
}

/// ζ(1 − 2k) = −B_{2k} / (2k), exactly.
pub fn zeta_negative_odd(k: usize) -> Result<Rational> {
    if !(1..=BERNOULLI_TABLE_LEN).contains(&k) {
        return Err(domain(
            "zeta_negative_odd",
            format!("k must lie in 1..={BERNOULLI_TABLE_LEN}, got {k}"),
        ));
    }
    Ok(-bernoulli_2k(k) / Rational::from_integer(BigInt::from(2 * k)))
}

/// ln Γ(x) for `x > 0`.
pub fn ln_gamma(x: f64) -> Result<f64> {
    if !(x > 0.0) || !x.is_finite() {
        return Err(domain("ln_gamma", format!("argument must be positive, got {x}")));
    }
    if x == 1.0 || x == 2.0 {
        return Ok(0.0);
    }
    let mut z = x;
    let mut shift = CompensatedSum::default();
    while z < 15.0 {
        shift.add(-z.ln());
        z += 1.0;
    }
    // B_{2k} / (2k (2k - 1)) for k = 1..8
    const STIRLING: [f64; 8] = [
        1.0 / 12.0,
        -1.0 / 360.0,
        1.0 / 1260.0,
        -1.0 / 1680.0,
        1.0 / 1188.0,
        -691.0 / 360_360.0,
        1.0 / 156.0,
        -3617.0 / 122_400.0,
    ];
    let inv = 1.0 / z;
    let inv2 = inv * inv;
    let mut series = 0.0;
    for c in STIRLING.iter().rev() {
        series = series * inv2 + c;
    }
    series *= inv;
    let half_ln_2pi = 0.918_938_533_204_672_8;
    shift.add((z - 0.5) * z.ln());
    shift.add(-z);
    shift.add(half_ln_2pi);
    shift.add(series);
    Ok(shift.value())
}

/// ln B(a, b) = ln Γ(a) + ln Γ(b) − ln Γ(a + b).
pub fn log_beta(a: f64, b: f64) -> Result<f64> {
    if !(a > 0.0) || !(b > 0.0) {
        return Err(domain("log_beta", format!("shapes must be positive, got ({a}, {b})")));
    }
    let mut acc = CompensatedSum::default();
    acc.add(ln_gamma(a)?);
    acc.add(ln_gamma(b)?);
    acc.add(-ln_gamma(a + b)?);
    Ok(acc.value())
}

const BETA_CF_MAX_ITER: usize = 300;

/// Continued fraction for I_x(a, b) (modified Lentz).
fn beta_continued_fraction(x: f64, a: f64, b: f64) -> f64 {
    const TINY: f64 = 1e-300;
    const EPS: f64 = 1e-16;
    let qab = a + b;
    let qap = a + 1.0;
    let qam = a - 1.0;
    let mut c = 1.0;
    let mut d = 1.0 - qab * x / qap;
    if d.abs() < TINY {
        d = TINY;
    }
    d = 1.0 / d;
    let mut h = d;
    for m in 1..=BETA_CF_MAX_ITER {
        let m = m as f64;
        let m2 = 2.0 * m;
        let aa = m * (b - m) * x / ((qam + m2) * (a + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        h *= d * c;
        let aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2));
        d = 1.0 + aa * d;
        if d.abs() < TINY {
            d = TINY;
        }
        c = 1.0 + aa / c;
        if c.abs() < TINY {
            c = TINY;
        }
        d = 1.0 / d;
        let del = d * c;
        h *= del;
        if (del - 1.0).abs() < EPS {
            break;
        }
    }
    h
}

fn check_beta_args(function: &'static str, x: f64, a: f64, b: f64) -> Result<()> {
    if !(0.0..=1.0).contains(&x) {
        return Err(domain(function, format!("x must lie in [0, 1], got {x}")));
    }
    if !(a > 0.0) || !(b > 0.0) {
        return Err(domain(function, format!("shapes must be positive, got ({a}, {b})")));
    }
    Ok(())
}

// Evaluates I_x(a, b) directly from the continued fraction; accurate when
// x < (a + 1) / (a + b + 2).
fn reg_beta_direct(x: f64, a: f64, b: f64) -> Result<f64> {
    if x == 0.0 {
        return Ok(0.0);
    }
    let ln_front = a * x.ln() + b * (-x).ln_1p() - log_beta(a, b)?;
    Ok(ln_front.exp() * beta_continued_fraction(x, a, b) / a)
}

/// Regularized incomplete beta function I_x(a, b).
pub fn reg_incomplete_beta(x: f64, a: f64, b: f64) -> Result<f64> {
    check_beta_args("reg_incomplete_beta", x, a, b)?;
    if x == 0.0 {
        return Ok(0.0);
    }
    if x == 1.0 {
        return Ok(1.0);
    }
    if x < (a + 1.0) / (a + b + 2.0) {
        reg_beta_direct(x, a, b)
    } else {
        Ok(1.0 - reg_beta_direct(1.0 - x, b, a)?)
    }
}

/// Upper tail 1 − I_x(a, b), evaluated without cancellation.
pub fn reg_incomplete_beta_complement(x: f64, a: f64, b: f64) -> Result<f64> {
    check_beta_args("reg_incomplete_beta_complement", x, a, b)?;
    if x == 0.0 {
        return Ok(1.0);
    }
    if x == 1.0 {
        return Ok(0.0);
    }
    if x < (a + 1.0) / (a + b + 2.0) {
        Ok(1.0 - reg_beta_direct(x, a, b)?)
    } else {
        reg_beta_direct(1.0 - x, b, a)
    }
}

/// Complementary error function.
pub fn erfc(x: f64) -> f64 {
    libm::erfc(x)
}

/// Converts an exact rational to the nearest `f64`.
pub fn rational_to_f64(r: &Rational) -> f64 {
    if let Some(v) = r.to_f64() {
        if v.is_finite() {
            return v;
        }
    }
    // Outside the directly convertible range: scale by powers of two.
    let num_bits = r.numer().bits() as i64;
    let den_bits = r.denom().bits() as i64;
    let shift = num_bits - den_bits;
    let scaled = if shift > 0 {
        r / Rational::from_integer(BigInt::one() << (shift as usize))
    } else {
        r * Rational::from_integer(BigInt::one() << ((-shift) as usize))
    };
    let mantissa = scaled.to_f64().unwrap_or(if r.is_negative() { -1.0 } else { 1.0 });
    mantissa * 2f64.powi(shift.clamp(i32::MIN as i64, i32::MAX as i64) as i32)
}
