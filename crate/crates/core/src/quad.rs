//! Adaptive one-dimensional quadrature.
//!
//! Globally adaptive bisection driven by the embedded 7-point Gauss /
//! 15-point Kronrod pair, with the QUADPACK local error heuristic. Semi-
//! infinite integrals with an exponentially decaying integrand are
//! truncated at a point where the neglected tail is provably small and
//! the truncation bound is folded into the error estimate.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use serde::Serialize;

use crate::error::{domain, Error, Result};
use crate::special_fn::CompensatedSum;

/// Outcome of a quadrature: value, absolute error estimate, and work done.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct QuadResult {
    pub value: f64,
    pub abs_error_estimate: f64,
    pub evaluations: usize,
    pub subdivisions: usize,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadConfig {
    pub abs_tol: f64,
    pub rel_tol: f64,
    pub max_subdivisions: usize,
    /// Panels narrower than this are never bisected further.
    pub min_panel_width: f64,
}

impl Default for QuadConfig {
    fn default() -> Self {
        Self {
            abs_tol: 1e-12,
            rel_tol: 0.0,
            max_subdivisions: 2000,
            min_panel_width: 0.0,
        }
    }
}

impl QuadConfig {
    pub fn with_abs_tol(abs_tol: f64) -> Self {
        Self {
            abs_tol,
            ..Self::default()
        }
    }

    fn validate(&self) -> Result<()> {
        if !(self.abs_tol > 0.0) || !(self.rel_tol >= 0.0) || self.max_subdivisions == 0 {
            return Err(domain(
                "quad",
                format!(
                    "invalid configuration: abs_tol = {}, rel_tol = {}, max_subdivisions = {}",
                    self.abs_tol, self.rel_tol, self.max_subdivisions
                ),
            ));
        }
        Ok(())
    }
}

/// Where an integrand lives.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum IntegrationDomain {
    Finite { a: f64, b: f64 },
    /// `[a, ∞)` with `|f(u)| <= C e^{-decay_rate u}` in the tail.
    Decaying { a: f64, decay_rate: f64 },
}

/// An evaluation rule paired with its domain.
pub struct Integrand<F> {
    pub rule: F,
    pub domain: IntegrationDomain,
}

impl<F: Fn(f64) -> f64> Integrand<F> {
    pub fn finite(rule: F, a: f64, b: f64) -> Self {
        Self {
            rule,
            domain: IntegrationDomain::Finite { a, b },
        }
    }

    pub fn decaying(rule: F, a: f64, decay_rate: f64) -> Self {
        Self {
            rule,
            domain: IntegrationDomain::Decaying { a, decay_rate },
        }
    }

    pub fn integrate(&self, cfg: &QuadConfig) -> Result<QuadResult> {
        match self.domain {
            IntegrationDomain::Finite { a, b } => integrate_finite(&self.rule, a, b, cfg),
            IntegrationDomain::Decaying { a, decay_rate } => {
                integrate_decaying(&self.rule, a, decay_rate, cfg)
            }
        }
    }
}

// Kronrod abscissae on [0, 1); odd indices are the Gauss nodes.
#[allow(clippy::excessive_precision)]
const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.000_000_000_000_000_000_000_000_000_000_000,
];

#[allow(clippy::excessive_precision)]
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

#[allow(clippy::excessive_precision)]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Panel {}

impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Panel {
    // Largest error first; ties broken by position for determinism.
    fn cmp(&self, other: &Self) -> Ordering {
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Result<Panel> {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_k = fc * WGK[7];
    let mut res_g = fc * WG[3];
    let mut res_abs = fc.abs() * WGK[7];
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    if !res_k.is_finite() || !fc.is_finite() {
        return Err(domain(
            "quad",
            format!("integrand is not finite on [{a}, {b}]"),
        ));
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let abs_half = half.abs();
    let value = res_k * half;
    res_abs *= abs_half;
    res_asc *= abs_half;
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    Ok(Panel { a, b, value, error: err })
}

const EVALS_PER_PANEL: usize = 15;

/// Integrates `f` over the finite interval `[a, b]`.
///
/// The requested accuracy is `max(abs_tol, rel_tol |I|)`. When the
/// subdivision budget runs out, [`Error::NonConvergence`] carries the
/// best estimate reached.
pub fn integrate_finite<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    cfg.validate()?;
    if !(a < b) || !a.is_finite() || !b.is_finite() {
        return Err(domain("integrate_finite", format!("need finite a < b, got [{a}, {b}]")));
    }
    let first = gauss_kronrod_15(&f, a, b)?;
    let mut heap = BinaryHeap::new();
    heap.push(first);
    let mut evaluations = EVALS_PER_PANEL;
    let mut total = first.value;
    let mut total_err = first.error;

    loop {
        let tol = cfg.abs_tol.max(cfg.rel_tol * total.abs());
        if total_err <= tol {
            break;
        }
        let worst = *heap.peek().expect("at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        let too_narrow = worst.b - worst.a <= cfg.min_panel_width
            || mid <= worst.a
            || mid >= worst.b
            || (worst.b - worst.a) <= 8.0 * f64::EPSILON * mid.abs().max(f64::MIN_POSITIVE);
        if heap.len() >= cfg.max_subdivisions || too_narrow {
            let best = finish(heap, evaluations);
            return Err(Error::NonConvergence {
                best,
                tolerance: tol,
            });
        }
        heap.pop();
        let left = gauss_kronrod_15(&f, worst.a, mid)?;
        let right = gauss_kronrod_15(&f, mid, worst.b)?;
        evaluations += 2 * EVALS_PER_PANEL;
        total += left.value + right.value - worst.value;
        total_err += left.error + right.error - worst.error;
        heap.push(left);
        heap.push(right);
        // Re-sum periodically so the running totals do not drift.
        if heap.len() % 64 == 0 {
            total = heap.iter().map(|p| p.value).sum();
            total_err = heap.iter().map(|p| p.error).sum();
        }
    }
    Ok(finish(heap, evaluations))
}

// Sums panels in positional order so the result does not depend on the
// order in which they were refined.
fn finish(heap: BinaryHeap<Panel>, evaluations: usize) -> QuadResult {
    let mut panels = heap.into_vec();
    panels.sort_by(|p, q| p.a.total_cmp(&q.a));
    let mut value = CompensatedSum::default();
    let mut err = CompensatedSum::default();
    for p in &panels {
        value.add(p.value);
        err.add(p.error);
    }
    QuadResult {
        value: value.value(),
        abs_error_estimate: err.value(),
        evaluations,
        subdivisions: panels.len(),
    }
}

/// Integrates `f` over `[a, ∞)` for an integrand whose tail decays at
/// least as fast as `C e^{-decay_rate u}`.
///
/// The envelope constant `C` is estimated by probing `|f| e^{rate (u-a)}`
/// on a spread of points; the interval is then cut where the neglected
/// mass falls below `abs_tol / 100`, and that bound is added to the
/// reported error estimate.
pub fn integrate_decaying<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    decay_rate: f64,
    cfg: &QuadConfig,
) -> Result<QuadResult> {
    cfg.validate()?;
    if !(decay_rate > 0.0) || !decay_rate.is_finite() || !a.is_finite() {
        return Err(domain(
            "integrate_decaying",
            format!("need finite a and positive decay rate, got a = {a}, rate = {decay_rate}"),
        ));
    }
    let mut ln_envelope = f64::NEG_INFINITY;
    let mut probe = |t: f64| {
        let v = f(a + t).abs();
        if v > 0.0 && v.is_finite() {
            ln_envelope = ln_envelope.max(v.ln() + decay_rate * t);
        }
    };
    for j in 0..=40 {
        probe(10f64.powf(-3.0 + 5.0 * j as f64 / 40.0));
    }
    for k in 1..=60 {
        probe(k as f64 / decay_rate);
    }
    let ln_bound_target = (cfg.abs_tol / 100.0 * decay_rate).ln();
    let (length, tail_bound) = if ln_envelope.is_finite() {
        // generous margin on the probed envelope
        let ln_c = ln_envelope + 10f64.ln();
        let length = ((ln_c - ln_bound_target) / decay_rate).max(1.0 / decay_rate);
        let tail = (ln_c - decay_rate * length).exp() / decay_rate;
        (length, tail)
    } else {
        (1.0 / decay_rate, 0.0)
    };
    let inner = QuadConfig {
        abs_tol: (cfg.abs_tol - tail_bound).max(0.5 * cfg.abs_tol),
        ..*cfg
    };
    match integrate_finite(&f, a, a + length, &inner) {
        Ok(mut r) => {
            r.abs_error_estimate += tail_bound;
            Ok(r)
        }
        Err(Error::NonConvergence { mut best, tolerance }) => {
            best.abs_error_estimate += tail_bound;
            Err(Error::NonConvergence { best, tolerance })
        }
        Err(e) => Err(e),
    }
}
