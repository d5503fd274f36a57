//! Pure states, partial traces and entropies of reduced states.

use num_complex::Complex64;
use serde::Serialize;

use super::linalg::{hermitian_eigenvalues, CMatrix};
use super::rng::SampleStream;
use crate::dims::{SubsystemDims, TripartiteDims};
use crate::error::{domain, Error, Result};

const NORM_TOL: f64 = 1e-12;

/// Pure state on `C^{d_S} ⊗ C^{d_E}`; coefficient `c_{i,j}` sits at
/// `i * d_E + j`.
#[derive(Debug, Clone, PartialEq)]
pub struct PureState {
    dims: SubsystemDims,
    coefficients: Vec<Complex64>,
}

impl PureState {
    pub fn new(dims: SubsystemDims, coefficients: Vec<Complex64>) -> Result<Self> {
        let n = dims.n() as usize;
        if coefficients.len() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                actual: coefficients.len(),
            });
        }
        let norm2: f64 = coefficients.iter().map(|c| c.norm_sqr()).sum();
        if (norm2 - 1.0).abs() > NORM_TOL {
            return Err(domain("PureState", format!("state is not normalized: |c|² = {norm2}")));
        }
        Ok(Self { dims, coefficients })
    }

    pub fn dims(&self) -> SubsystemDims {
        self.dims
    }

    pub fn coefficients(&self) -> &[Complex64] {
        &self.coefficients
    }

    pub fn coefficient(&self, i: usize, j: usize) -> Complex64 {
        self.coefficients[i * self.dims.d_e() as usize + j]
    }

    /// Same vector with subsystem and environment exchanged.
    pub fn transposed(&self) -> PureState {
        let (d_s, d_e) = (self.dims.d_s() as usize, self.dims.d_e() as usize);
        let mut out = Vec::with_capacity(self.coefficients.len());
        for j in 0..d_e {
            for i in 0..d_s {
                out.push(self.coefficients[i * d_e + j]);
            }
        }
        PureState {
            dims: self.dims.swapped(),
            coefficients: out,
        }
    }

    /// Same vector viewed with a different subsystem dimension (row-major
    /// regrouping; `d_s` must divide `N`).
    pub fn regrouped(&self, d_s: u64) -> Result<PureState> {
        let n = self.dims.n();
        if d_s == 0 || n % d_s != 0 {
            return Err(Error::NotDivisible {
                what: "state dimension",
                value: n,
                divisor: d_s,
            });
        }
        Ok(PureState {
            dims: SubsystemDims::new(d_s, n / d_s)?,
            coefficients: self.coefficients.clone(),
        })
    }
}

/// Draws a Haar-random pure state: `2N` standard normals, normalized.
pub fn sample_state(dims: SubsystemDims, stream: &mut SampleStream) -> PureState {
    let n = dims.n() as usize;
    let mut coefficients: Vec<Complex64> = (0..n)
        .map(|_| {
            let re = stream.normal();
            let im = stream.normal();
            Complex64::new(re, im)
        })
        .collect();
    let norm = coefficients.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
    for c in &mut coefficients {
        *c /= norm;
    }
    PureState { dims, coefficients }
}

/// A reduced density matrix, Hermitian by construction.
#[derive(Debug, Clone, PartialEq)]
pub struct ReducedDensity {
    matrix: CMatrix,
}

impl ReducedDensity {
    /// Wraps a matrix after checking Hermiticity and unit trace.
    pub fn from_matrix(matrix: CMatrix) -> Result<Self> {
        if matrix.hermiticity_defect() > 1e-12 {
            return Err(domain("ReducedDensity", "matrix is not Hermitian"));
        }
        let tr = matrix.trace();
        if (tr.re - 1.0).abs() > NORM_TOL || tr.im.abs() > NORM_TOL {
            return Err(domain("ReducedDensity", format!("trace is {tr}, expected 1")));
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.dim()
    }

    /// Diagonal entries `P_k = ρ_kk`.
    pub fn diagonal(&self) -> Vec<f64> {
        (0..self.dim()).map(|k| self.matrix[(k, k)].re).collect()
    }

    /// `Tr ρ² = Σ_kl |ρ_kl|²`.
    pub fn purity(&self) -> f64 {
        let n = self.matrix.frobenius_norm();
        n * n
    }

    pub fn eigenvalues(&self) -> Result<Vec<f64>> {
        hermitian_eigenvalues(&self.matrix)
    }
}

/// `ρ_kl = Σ_j c_{k,j} conj(c_{l,j})`; the upper triangle is computed and
/// mirrored.
pub fn partial_trace(state: &PureState) -> ReducedDensity {
    let d_s = state.dims.d_s() as usize;
    let d_e = state.dims.d_e() as usize;
    let c = &state.coefficients;
    let mut m = CMatrix::zeros(d_s);
    for k in 0..d_s {
        let row_k = &c[k * d_e..(k + 1) * d_e];
        let diag: f64 = row_k.iter().map(|z| z.norm_sqr()).sum();
        m[(k, k)] = Complex64::new(diag, 0.0);
        for l in k + 1..d_s {
            let row_l = &c[l * d_e..(l + 1) * d_e];
            let v: Complex64 = row_k.iter().zip(row_l).map(|(a, b)| a * b.conj()).sum();
            m[(k, l)] = v;
            m[(l, k)] = v.conj();
        }
    }
    ReducedDensity { matrix: m }
}

/// Entropies (nats) and purity of a reduced state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Entropies {
    pub von_neumann: f64,
    pub diagonal: f64,
    pub purity: f64,
}

/// Eigenvalues at or below this are treated as zero in `−λ ln λ`.
pub const ENTROPY_CUTOFF: f64 = 1e-15;

pub(crate) fn shannon(p: impl IntoIterator<Item = f64>) -> f64 {
    p.into_iter()
        .filter(|&x| x > ENTROPY_CUTOFF)
        .map(|x| -x * x.ln())
        .sum()
}

pub fn entropies(rho: &ReducedDensity) -> Result<Entropies> {
    let eig = rho.eigenvalues()?;
    Ok(Entropies {
        von_neumann: shannon(eig),
        diagonal: shannon(rho.diagonal()),
        purity: rho.purity(),
    })
}

/// Von Neumann entropy of the first factor of `state`, computed from
/// whichever side of the bipartition is smaller (the spectra agree).
pub fn entanglement_entropy(state: &PureState) -> Result<f64> {
    let rho = if state.dims.d_s() <= state.dims.d_e() {
        partial_trace(state)
    } else {
        partial_trace(&state.transposed())
    };
    Ok(shannon(rho.eigenvalues()?))
}

/// Reorders a state on `A ⊗ B ⊗ E` (index `(a, b, e)`) into `B ⊗ A ⊗ E`.
pub fn permute_ab(state: &PureState, dims: TripartiteDims) -> Result<PureState> {
    if state.dims.n() != dims.n() {
        return Err(Error::DimensionMismatch {
            expected: dims.n() as usize,
            actual: state.dims.n() as usize,
        });
    }
    let (d_a, d_b, d_e) = (dims.d_a() as usize, dims.d_b() as usize, dims.d_e() as usize);
    let c = &state.coefficients;
    let mut out = Vec::with_capacity(c.len());
    for b in 0..d_b {
        for a in 0..d_a {
            let base = (a * d_b + b) * d_e;
            out.extend_from_slice(&c[base..base + d_e]);
        }
    }
    Ok(PureState {
        dims: SubsystemDims::new(dims.d_b(), dims.d_a() * dims.d_e())?,
        coefficients: out,
    })
}

/// `S(A) + S(B) − S(AB)` for one tripartite pure state.
pub fn tripartite_mutual_information(state: &PureState, dims: TripartiteDims) -> Result<f64> {
    let s_a = entanglement_entropy(&state.regrouped(dims.d_a())?)?;
    let s_b = entanglement_entropy(&permute_ab(state, dims)?)?;
    let s_ab = entanglement_entropy(&state.regrouped(dims.d_ab())?)?;
    Ok(s_a + s_b - s_ab)
}
