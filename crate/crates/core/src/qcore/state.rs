use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;
use rand_distr::StandardNormal;

use super::eigen::min_eigenvalue;
use super::{ComplexMatrix, DIM, STRUCTURAL_TOL};
use crate::error::{Error, Result};

/// Normalized state vector.
#[derive(Clone, Debug, PartialEq)]
pub struct Ket {
    amplitudes: Vec<Complex64>,
}

impl Ket {
    /// Wraps amplitudes that are already normalized within `1e-12`.
    pub fn new(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm_sqr: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if amplitudes.is_empty() || (norm_sqr - 1.0).abs() > STRUCTURAL_TOL {
            return Err(Error::NotNormalized { norm_sqr });
        }
        Ok(Self { amplitudes })
    }

    /// Rescales arbitrary nonzero amplitudes to unit norm.
    pub fn normalized(amplitudes: Vec<Complex64>) -> Result<Self> {
        let norm_sqr: f64 = amplitudes.iter().map(|z| z.norm_sqr()).sum();
        if amplitudes.is_empty() || norm_sqr <= f64::MIN_POSITIVE {
            return Err(Error::NotNormalized { norm_sqr });
        }
        let inv = 1.0 / norm_sqr.sqrt();
        Ok(Self { amplitudes: amplitudes.into_iter().map(|z| z * inv).collect() })
    }

    pub fn basis(dim: usize, index: usize) -> Self {
        let mut amplitudes = alloc::vec![Complex64::new(0.0, 0.0); dim];
        amplitudes[index] = Complex64::new(1.0, 0.0);
        Self { amplitudes }
    }

    pub fn dim(&self) -> usize {
        self.amplitudes.len()
    }

    pub fn amplitudes(&self) -> &[Complex64] {
        &self.amplitudes
    }

    /// `⟨self|other⟩`
    pub fn inner(&self, other: &Ket) -> Complex64 {
        self.amplitudes.iter().zip(&other.amplitudes).map(|(a, b)| a.conj() * b).sum()
    }

    /// `|⟨self|other⟩|²`, insensitive to global phase.
    pub fn fidelity(&self, other: &Ket) -> f64 {
        self.inner(other).norm_sqr()
    }

    pub fn projector(&self) -> ComplexMatrix {
        let n = self.dim();
        let mut m = ComplexMatrix::zeros(n);
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] = self.amplitudes[i] * self.amplitudes[j].conj();
            }
        }
        m
    }
}

/// Trace-one positive semidefinite operator on the path⊗polarization space.
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    matrix: ComplexMatrix,
}

impl DensityMatrix {
    pub fn new(matrix: ComplexMatrix) -> Result<Self> {
        matrix.check_dim(DIM)?;
        let deviation = matrix.hermitian_deviation();
        if deviation > STRUCTURAL_TOL {
            return Err(Error::NotHermitian { deviation });
        }
        let trace = matrix.trace();
        if (trace.re - 1.0).abs() > STRUCTURAL_TOL || trace.im.abs() > STRUCTURAL_TOL {
            return Err(Error::TraceNotOne { trace: trace.re });
        }
        let min_eigenvalue = min_eigenvalue(&matrix);
        if min_eigenvalue < -super::SPECTRAL_TOL {
            return Err(Error::NotPositive { min_eigenvalue });
        }
        Ok(Self { matrix })
    }

    pub fn from_ket(ket: &Ket) -> Result<Self> {
        if ket.dim() != DIM {
            return Err(Error::DimensionMismatch { expected: DIM, found: ket.dim() });
        }
        Ok(Self { matrix: ket.projector() })
    }

    pub fn maximally_mixed() -> Self {
        Self { matrix: ComplexMatrix::identity(DIM).scale_real(0.25) }
    }

    /// Convex combination; weights must be nonnegative and sum to one.
    pub fn mixture(components: &[(f64, &DensityMatrix)]) -> Result<Self> {
        let total: f64 = components.iter().map(|(w, _)| w).sum();
        if components.is_empty() || components.iter().any(|(w, _)| *w < 0.0) || (total - 1.0).abs() > STRUCTURAL_TOL {
            return Err(Error::InvalidWeights);
        }
        let mut m = ComplexMatrix::zeros(DIM);
        for (w, rho) in components {
            m = &m + &rho.matrix.scale_real(*w);
        }
        Self::new(m)
    }

    /// Ginibre-ensemble random state: `G G† / Tr(G G†)` with complex Gaussian `G`.
    pub fn random<R: Rng + ?Sized>(rng: &mut R) -> Self {
        let entries: Vec<Complex64> =
            (0..DIM * DIM).map(|_| Complex64::new(rng.sample(StandardNormal), rng.sample(StandardNormal))).collect();
        let g = ComplexMatrix::from_entries(entries);
        let gg = &g * &g.adjoint();
        let tr = gg.trace().re;
        let mut m = gg.scale_real(1.0 / tr);
        // Remove rounding-level anti-Hermitian parts.
        m = (&m + &m.adjoint()).scale_real(0.5);
        Self { matrix: m }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn purity(&self) -> f64 {
        (&self.matrix * &self.matrix).trace().re
    }
}

/// `Tr(ρ O)` for Hermitian `O`.
pub fn expectation(rho: &DensityMatrix, observable: &ComplexMatrix) -> Result<f64> {
    observable.check_dim(rho.matrix.dim())?;
    let deviation = observable.hermitian_deviation();
    if deviation > STRUCTURAL_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let value = (&rho.matrix * observable).trace();
    if value.im.abs() > super::SPECTRAL_TOL {
        return Err(Error::ImaginaryResidue { residue: value.im });
    }
    Ok(value.re)
}

/// Spectral projectors `(I ± O)/2` of a ±1-valued observable.
pub fn pm_projectors(observable: &ComplexMatrix) -> Result<(ComplexMatrix, ComplexMatrix)> {
    let deviation = observable.hermitian_deviation();
    if deviation > STRUCTURAL_TOL {
        return Err(Error::NotHermitian { deviation });
    }
    let id = ComplexMatrix::identity(observable.dim());
    let deviation = (observable * observable).max_abs_diff(&id);
    if deviation > super::SPECTRAL_TOL {
        return Err(Error::NotInvolution { deviation });
    }
    let plus = (&id + observable).scale_real(0.5);
    let minus = (&id - observable).scale_real(0.5);
    Ok((plus, minus))
}

/// Transpose on the polarization factor.
pub fn partial_transpose(rho: &DensityMatrix) -> ComplexMatrix {
    partial_transpose_matrix(&rho.matrix)
}

fn partial_transpose_matrix(m: &ComplexMatrix) -> ComplexMatrix {
    let mut out = ComplexMatrix::zeros(DIM);
    for path_row in 0..2 {
        for path_col in 0..2 {
            for pol_row in 0..2 {
                for pol_col in 0..2 {
                    out[(2 * path_row + pol_col, 2 * path_col + pol_row)] =
                        m[(2 * path_row + pol_row, 2 * path_col + pol_col)];
                }
            }
        }
    }
    out
}
