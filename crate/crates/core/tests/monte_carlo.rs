use typicality::haar_mc::ensemble::RETAIN_CAP;
use typicality::haar_mc::ks::KS_MIN_SAMPLES;
use typicality::haar_mc::{
    ks_critical_value, ks_distance, ks_test, mi_ensemble, run_ensemble, KsMethod, Moments,
    SampleStream,
};
use typicality::special_fn::reg_incomplete_beta;
use typicality::{Error, SubsystemDims, TripartiteDims};

const SEED: u64 = 7_001;

fn sub(d_s: u64, d_e: u64) -> SubsystemDims {
    SubsystemDims::new(d_s, d_e).unwrap()
}

#[test]
fn qubit_pure_state_weights() {
    // A single qubit: |c_1|² is uniform on [0, 1].
    let stats = run_ensemble(sub(2, 1), 40_000, SEED, 2).unwrap();
    let p1 = &stats.p[0];
    assert!((p1.mean() - 0.5).abs() < 5.0 * p1.std_error());
    assert!((p1.variance() - 1.0 / 12.0).abs() < 2e-3);
    assert_eq!(stats.majorization_violations, 0);
}

#[test]
fn moments_merge_matches_sequential() {
    let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 / 7.0).collect();
    let mut whole = Moments::new();
    xs.iter().for_each(|&x| whole.push(x));
    let parts: Vec<Moments> = xs
        .chunks(137)
        .map(|c| {
            let mut m = Moments::new();
            c.iter().for_each(|&x| m.push(x));
            m
        })
        .collect();
    let mut left = Moments::new();
    parts.iter().for_each(|p| left.merge(p));
    let mut right = Moments::new();
    parts.iter().rev().for_each(|p| right.merge(p));
    for m in [&left, &right] {
        assert_eq!(m.count(), whole.count());
        assert!((m.mean() - whole.mean()).abs() < 1e-12);
        assert!((m.variance() - whole.variance()).abs() < 1e-10);
    }
}

#[test]
fn worker_count_does_not_change_results() {
    let a = run_ensemble(sub(3, 4), 5_000, SEED, 1).unwrap();
    let b = run_ensemble(sub(3, 4), 5_000, SEED, 3).unwrap();
    let c = run_ensemble(sub(3, 4), 5_000, SEED, 8).unwrap();
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&b).unwrap());
    assert_eq!(serde_json::to_string(&a).unwrap(), serde_json::to_string(&c).unwrap());
    assert_eq!(a.p1_retained, c.p1_retained);
    let other = run_ensemble(sub(3, 4), 5_000, SEED + 1, 1).unwrap();
    assert_ne!(a.purity.mean(), other.purity.mean());
}

#[test]
fn p1_follows_its_beta_law() {
    let dims = sub(2, 6);
    let stats = run_ensemble(dims, 10_000, SEED, 4).unwrap();
    let ks = ks_test(&stats, dims).unwrap();
    assert_eq!(ks.method, KsMethod::Retained);
    assert!(ks.statistic < 1.63 / 100.0, "KS {}", ks.statistic);
}

/// Beta(a, b) draws built from sums of squared normals, independent of the
/// state sampler.
fn beta_from_gamma_sums(a: u64, b: u64, n: u64) -> Vec<f64> {
    (0..n)
        .map(|i| {
            let mut s = SampleStream::new(SEED, i);
            let mut chi = |k: u64| (0..2 * k).map(|_| s.normal().powi(2)).sum::<f64>();
            let x = chi(a);
            let y = chi(b);
            x / (x + y)
        })
        .collect()
}

#[test]
fn ks_distance_accepts_the_right_law_and_rejects_the_wrong_one() {
    let n = 20_000;
    let xs = beta_from_gamma_sums(6, 6, n);
    let crit = ks_critical_value(n, 0.01);
    let good = ks_distance(&xs, |x| reg_incomplete_beta(x, 6.0, 6.0)).unwrap();
    assert!(good < crit, "{good} vs {crit}");
    let bad = ks_distance(&xs, |x| reg_incomplete_beta(x, 1.0, 1.0)).unwrap();
    assert!(bad > 10.0 * crit, "{bad} vs {crit}");
}

#[test]
fn histogram_path_beyond_the_retention_cap() {
    let dims = sub(2, 2);
    let samples = RETAIN_CAP as u64 + 20_000;
    let stats = run_ensemble(dims, samples, SEED, 4).unwrap();
    assert_eq!(stats.p1_retained.len(), RETAIN_CAP);
    assert_eq!(stats.p1_histogram.total(), samples);
    let ks = ks_test(&stats, dims).unwrap();
    assert_eq!(ks.method, KsMethod::Histogram);
    assert!(ks.bias_bound > 0.0 && ks.bias_bound < 0.01);
    assert!(ks.statistic + ks.bias_bound < ks.critical_value(0.01));
}

#[test]
fn trivial_subsystem_has_no_mutual_information() {
    let dims = TripartiteDims::new(1, 2, 4).unwrap();
    let m = mi_ensemble(dims, 2_000, SEED, 2).unwrap();
    assert_eq!(m.count, 2_000);
    assert!(m.mean_mi.abs() < 1e-10);
}

#[test]
fn cross_moment_of_distinct_weights() {
    // E[|c_i|² |c_j|²] = 1/(N(N+1)) for i ≠ j.
    let dims = sub(2, 3);
    let stats = run_ensemble(dims, 40_000, SEED, 4).unwrap();
    let m = &stats.cross_moment;
    let target = 1.0 / (6.0 * 7.0);
    assert!((m.mean() - target).abs() < 5.0 * m.std_error());
}

#[test]
fn too_few_samples_for_ks() {
    let dims = sub(2, 3);
    let stats = run_ensemble(dims, KS_MIN_SAMPLES - 1, SEED, 1).unwrap();
    assert!(matches!(ks_test(&stats, dims), Err(Error::InsufficientSamples { .. })));
    assert!(run_ensemble(dims, 0, SEED, 1).is_err());
}
