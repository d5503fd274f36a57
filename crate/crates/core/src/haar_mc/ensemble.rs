//! Ensemble runs: per-sample observables folded into [`EnsembleStats`].
//!
//! The sample index range is cut into fixed blocks of [`BLOCK_SIZE`]
//! indices. Each block is accumulated on its own and the block results are
//! merged strictly in block order, so the statistics are bit-identical for
//! any number of workers.

use serde::Serialize;

use super::density::{entropies, partial_trace, sample_state, tripartite_mutual_information};
use super::gellmann::{bloch_components, gellmann_basis, GellMannBasis};
use super::rng::SampleStream;
use super::stats::{Histogram, Moments};
use crate::dims::{SubsystemDims, TripartiteDims};
use crate::error::{domain, Result};

pub const BLOCK_SIZE: u64 = 1024;
const BLOCKS_PER_WORKER: u64 = 16;

/// Number of leading `P_1` samples kept verbatim for goodness-of-fit tests.
pub const RETAIN_CAP: usize = 100_000;

/// Schur slack: a sample counts as a violation when
/// `S_vN > S_diag + MAJORIZATION_SLACK`.
pub const MAJORIZATION_SLACK: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EnsembleStats {
    pub dims: SubsystemDims,
    pub count: u64,
    /// One accumulator per diagonal entry `P_k`.
    pub p: Vec<Moments>,
    pub purity: Moments,
    pub von_neumann: Moments,
    pub diagonal_entropy: Moments,
    /// Per-sample average `(1/d_S) Σ_k P_k ln P_k`.
    pub plogp: Moments,
    /// `|c_{1,1}|² |c_{d_S,d_E}|²`, a product over two distinct index pairs.
    pub cross_moment: Moments,
    /// Bloch components `r_a`, in [`GellMannBasis`] order.
    pub bloch: Vec<Moments>,
    /// Squares `r_a²`.
    pub bloch_sq: Vec<Moments>,
    /// Which generators are Cartan, parallel to `bloch`.
    pub cartan: Vec<bool>,
    /// Per-sample mean of `r_a²` over the Cartan family minus the same
    /// mean over the off-diagonal family.
    pub family_gap: Moments,
    pub p1_histogram: Histogram,
    /// The first (by sample index) `P_1` values, up to [`RETAIN_CAP`].
    #[serde(skip)]
    pub p1_retained: Vec<f64>,
    pub majorization_violations: u64,
}

impl EnsembleStats {
    pub fn empty(dims: SubsystemDims) -> Self {
        let d = dims.d_s() as usize;
        let cartan: Vec<bool> = match gellmann_basis(d) {
            Ok(b) => b.generators().iter().map(|g| g.family.is_cartan()).collect(),
            Err(_) => Vec::new(),
        };
        let g = cartan.len();
        Self {
            dims,
            count: 0,
            p: vec![Moments::new(); d],
            purity: Moments::new(),
            von_neumann: Moments::new(),
            diagonal_entropy: Moments::new(),
            plogp: Moments::new(),
            cross_moment: Moments::new(),
            bloch: vec![Moments::new(); g],
            bloch_sq: vec![Moments::new(); g],
            cartan,
            family_gap: Moments::new(),
            p1_histogram: Histogram::default(),
            p1_retained: Vec::new(),
            majorization_violations: 0,
        }
    }

    /// Folds `other` into `self`; the retained `P_1` values of `other` are
    /// appended after those of `self`.
    pub fn merge(&mut self, other: &EnsembleStats) {
        self.count += other.count;
        for (a, b) in self.p.iter_mut().zip(&other.p) {
            a.merge(b);
        }
        self.purity.merge(&other.purity);
        self.von_neumann.merge(&other.von_neumann);
        self.diagonal_entropy.merge(&other.diagonal_entropy);
        self.plogp.merge(&other.plogp);
        self.cross_moment.merge(&other.cross_moment);
        for (a, b) in self.bloch.iter_mut().zip(&other.bloch) {
            a.merge(b);
        }
        for (a, b) in self.bloch_sq.iter_mut().zip(&other.bloch_sq) {
            a.merge(b);
        }
        self.family_gap.merge(&other.family_gap);
        self.p1_histogram.merge(&other.p1_histogram);
        let room = RETAIN_CAP.saturating_sub(self.p1_retained.len());
        self.p1_retained
            .extend(other.p1_retained.iter().take(room).copied());
        self.majorization_violations += other.majorization_violations;
    }

    /// Sample variance of `r_a` and its standard error (delta method on
    /// the first two moments).
    pub fn bloch_variance(&self, a: usize) -> (f64, f64) {
        let m = &self.bloch[a];
        let sq = &self.bloch_sq[a];
        let n = m.count() as f64;
        let var = m.variance();
        // Var[r²] dominates; the correction from the estimated mean is O(1/n).
        let se = (sq.variance() / n).sqrt();
        (var, se)
    }

    fn family_mean(&self, cartan: bool) -> Option<f64> {
        let idx: Vec<usize> = (0..self.cartan.len()).filter(|&a| self.cartan[a] == cartan).collect();
        if idx.is_empty() {
            return None;
        }
        Some(idx.iter().map(|&a| self.bloch_variance(a).0).sum::<f64>() / idx.len() as f64)
    }

    /// Mean per-generator variance over the Cartan family.
    pub fn cartan_mean_variance(&self) -> Option<f64> {
        self.family_mean(true)
    }

    /// Mean per-generator variance over the off-diagonal family.
    pub fn offdiag_mean_variance(&self) -> Option<f64> {
        self.family_mean(false)
    }
}

struct Observer {
    dims: SubsystemDims,
    basis: Option<GellMannBasis>,
}

impl Observer {
    fn new(dims: SubsystemDims) -> Result<Self> {
        if dims.d_s() > super::linalg::MAX_JACOBI_DIM as u64 {
            return Err(domain(
                "run_ensemble",
                format!("d_S = {} exceeds the eigensolver limit {}", dims.d_s(), super::linalg::MAX_JACOBI_DIM),
            ));
        }
        let basis = if dims.d_s() >= 2 {
            Some(gellmann_basis(dims.d_s() as usize)?)
        } else {
            None
        };
        Ok(Self { dims, basis })
    }

    fn observe(&self, seed: u64, index: u64, acc: &mut EnsembleStats) -> Result<()> {
        let state = sample_state(self.dims, &mut SampleStream::new(seed, index));
        let rho = partial_trace(&state);
        let e = entropies(&rho)?;
        let diag = rho.diagonal();

        acc.count += 1;
        for (m, &pk) in acc.p.iter_mut().zip(&diag) {
            m.push(pk);
        }
        acc.purity.push(e.purity);
        acc.von_neumann.push(e.von_neumann);
        acc.diagonal_entropy.push(e.diagonal);
        let plogp: f64 = diag.iter().filter(|&&x| x > 0.0).map(|&x| x * x.ln()).sum();
        acc.plogp.push(plogp / diag.len() as f64);
        let c = state.coefficients();
        if c.len() >= 2 {
            acc.cross_moment.push(c[0].norm_sqr() * c[c.len() - 1].norm_sqr());
        }
        if let Some(basis) = &self.basis {
            let r = bloch_components(&rho, basis)?;
            let (mut cartan_sq, mut offdiag_sq) = (0.0, 0.0);
            for (a, &ra) in r.iter().enumerate() {
                acc.bloch[a].push(ra);
                acc.bloch_sq[a].push(ra * ra);
                if acc.cartan[a] {
                    cartan_sq += ra * ra;
                } else {
                    offdiag_sq += ra * ra;
                }
            }
            let d = self.dims.d_s() as f64;
            acc.family_gap.push(cartan_sq / (d - 1.0) - offdiag_sq / (d * (d - 1.0)));
        }
        acc.p1_histogram.push(diag[0]);
        if acc.p1_retained.len() < RETAIN_CAP {
            acc.p1_retained.push(diag[0]);
        }
        if e.von_neumann > e.diagonal + MAJORIZATION_SLACK {
            acc.majorization_violations += 1;
        }
        Ok(())
    }
}

/// Runs `block(first_index, end_index)` over every block of `0..samples`
/// on up to `workers` threads and hands the results to `fold` in block
/// order.
fn for_each_block<T, B, F>(samples: u64, workers: usize, block: B, mut fold: F) -> Result<()>
where
    T: Send,
    B: Fn(u64, u64) -> Result<T> + Sync,
    F: FnMut(T),
{
    let workers = workers.max(1) as u64;
    let n_blocks = samples.div_ceil(BLOCK_SIZE);
    let range = |b: u64| (b * BLOCK_SIZE, ((b + 1) * BLOCK_SIZE).min(samples));
    let batch = workers * BLOCKS_PER_WORKER;
    let mut start = 0;
    while start < n_blocks {
        let end = (start + batch).min(n_blocks);
        let results: Vec<Result<T>> = if workers == 1 {
            (start..end).map(|b| {
                let (lo, hi) = range(b);
                block(lo, hi)
            }).collect()
        } else {
            let block = &block;
            let mut slots: Vec<Option<Result<T>>> = (start..end).map(|_| None).collect();
            std::thread::scope(|s| {
                let handles: Vec<_> = (0..workers)
                    .map(|w| {
                        s.spawn(move || {
                            (start + w..end)
                                .step_by(workers as usize)
                                .map(|b| {
                                    let (lo, hi) = range(b);
                                    (b, block(lo, hi))
                                })
                                .collect::<Vec<_>>()
                        })
                    })
                    .collect();
                for h in handles {
                    for (b, r) in h.join().expect("ensemble worker panicked") {
                        slots[(b - start) as usize] = Some(r);
                    }
                }
            });
            slots.into_iter().map(|r| r.expect("every block is assigned")).collect()
        };
        for r in results {
            fold(r?);
        }
        start = end;
    }
    Ok(())
}

fn check_samples(samples: u64) -> Result<()> {
    if samples == 0 {
        return Err(domain("run_ensemble", "need at least one sample"));
    }
    Ok(())
}

/// Samples `samples` Haar states on `C^{d_S} ⊗ C^{d_E}` and accumulates
/// their reduced-state statistics.
pub fn run_ensemble(dims: SubsystemDims, samples: u64, seed: u64, workers: usize) -> Result<EnsembleStats> {
    check_samples(samples)?;
    let observer = Observer::new(dims)?;
    let mut total = EnsembleStats::empty(dims);
    for_each_block(
        samples,
        workers,
        |lo, hi| {
            let mut acc = EnsembleStats::empty(dims);
            for i in lo..hi {
                observer.observe(seed, i, &mut acc)?;
            }
            Ok(acc)
        },
        |acc| total.merge(&acc),
    )?;
    Ok(total)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MiEnsemble {
    pub mean_mi: f64,
    pub stderr: f64,
    pub count: u64,
}

/// Mean of `S(A) + S(B) − S(AB)` over Haar states on `A ⊗ B ⊗ E`.
pub fn mi_ensemble(dims: TripartiteDims, samples: u64, seed: u64, workers: usize) -> Result<MiEnsemble> {
    check_samples(samples)?;
    let joint = SubsystemDims::new(dims.d_ab(), dims.d_e())?;
    let mut total = Moments::new();
    for_each_block(
        samples,
        workers,
        |lo, hi| {
            let mut acc = Moments::new();
            for i in lo..hi {
                let state = sample_state(joint, &mut SampleStream::new(seed, i));
                acc.push(tripartite_mutual_information(&state, dims)?);
            }
            Ok(acc)
        },
        |acc| total.merge(&acc),
    )?;
    Ok(MiEnsemble {
        mean_mi: total.mean(),
        stderr: total.std_error(),
        count: total.count(),
    })
}
