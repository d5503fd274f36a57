//! Generalized Gell-Mann basis of `su(d)` and Bloch-vector decomposition
//! `ρ = I/d + ½ Σ_a r_a λ_a`, `r_a = Tr(ρ λ_a)`.

use num_complex::Complex64;

use super::density::ReducedDensity;
use super::linalg::CMatrix;
use crate::error::{domain, Error, Result};

pub const MAX_BASIS_DIM: usize = 64;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GeneratorFamily {
    /// Traceless diagonal generator.
    Cartan,
    /// `E_kl + E_lk`
    Symmetric,
    /// `−i E_kl + i E_lk`
    Antisymmetric,
}

impl GeneratorFamily {
    pub fn is_cartan(self) -> bool {
        self == GeneratorFamily::Cartan
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Generator {
    pub family: GeneratorFamily,
    pub matrix: CMatrix,
}

/// The `d² − 1` generators normalized to `Tr(λ_a λ_b) = 2 δ_ab`; the
/// off-diagonal pairs come first, then the `d − 1` Cartan generators.
#[derive(Debug, Clone, PartialEq)]
pub struct GellMannBasis {
    d: usize,
    generators: Vec<Generator>,
}

impl GellMannBasis {
    pub fn d(&self) -> usize {
        self.d
    }

    pub fn generators(&self) -> &[Generator] {
        &self.generators
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn cartan_count(&self) -> usize {
        self.generators.iter().filter(|g| g.family.is_cartan()).count()
    }

    pub fn offdiag_count(&self) -> usize {
        self.len() - self.cartan_count()
    }

    /// `I/d + ½ Σ_a r_a λ_a`.
    pub fn reconstruct(&self, components: &[f64]) -> Result<CMatrix> {
        if components.len() != self.len() {
            return Err(Error::DimensionMismatch {
                expected: self.len(),
                actual: components.len(),
            });
        }
        let d = self.d;
        let mut m = CMatrix::identity(d);
        for i in 0..d {
            m[(i, i)] /= d as f64;
        }
        for (g, &r) in self.generators.iter().zip(components) {
            for i in 0..d {
                for j in 0..d {
                    m[(i, j)] += g.matrix[(i, j)] * (0.5 * r);
                }
            }
        }
        Ok(m)
    }
}

pub fn gellmann_basis(d: usize) -> Result<GellMannBasis> {
    if !(2..=MAX_BASIS_DIM).contains(&d) {
        return Err(domain("gellmann_basis", format!("d must lie in 2..={MAX_BASIS_DIM}, got {d}")));
    }
    let one = Complex64::new(1.0, 0.0);
    let i = Complex64::new(0.0, 1.0);
    let mut generators = Vec::with_capacity(d * d - 1);
    for k in 0..d {
        for l in k + 1..d {
            let mut sym = CMatrix::zeros(d);
            sym[(k, l)] = one;
            sym[(l, k)] = one;
            generators.push(Generator {
                family: GeneratorFamily::Symmetric,
                matrix: sym,
            });
            let mut anti = CMatrix::zeros(d);
            anti[(k, l)] = -i;
            anti[(l, k)] = i;
            generators.push(Generator {
                family: GeneratorFamily::Antisymmetric,
                matrix: anti,
            });
        }
    }
    for m in 1..d {
        let norm = (2.0 / (m * (m + 1)) as f64).sqrt();
        let mut diag = vec![0.0; d];
        for v in diag.iter_mut().take(m) {
            *v = norm;
        }
        diag[m] = -(m as f64) * norm;
        generators.push(Generator {
            family: GeneratorFamily::Cartan,
            matrix: CMatrix::from_real_diagonal(&diag),
        });
    }
    Ok(GellMannBasis { d, generators })
}

const IMAGINARY_RESIDUE_TOL: f64 = 1e-12;

/// Bloch components `r_a = Tr(ρ λ_a)`.
pub fn bloch_components(rho: &ReducedDensity, basis: &GellMannBasis) -> Result<Vec<f64>> {
    let m = rho.matrix();
    if m.dim() != basis.d {
        return Err(Error::DimensionMismatch {
            expected: basis.d,
            actual: m.dim(),
        });
    }
    basis
        .generators
        .iter()
        .map(|g| {
            let z = m.trace_product(&g.matrix);
            if z.im.abs() > IMAGINARY_RESIDUE_TOL {
                return Err(domain(
                    "bloch_components",
                    format!("imaginary residue {} exceeds tolerance; input is not Hermitian", z.im),
                ));
            }
            Ok(z.re)
        })
        .collect()
}
