//! Dense complex linear algebra on the path⊗polarization space.
//!
//! Basis order is fixed everywhere as `(|t,H⟩, |t,V⟩, |r,H⟩, |r,V⟩)`: the path
//! qubit (`|0⟩ = t`, `|1⟩ = r`) is the slow index and the polarization qubit
//! (`|0⟩ = H`, `|1⟩ = V`) the fast one, so mode `k` is `2·path + polarization`.

mod eigen;
mod matrix;
mod state;

pub use eigen::{hermitian_eigenvalues, min_eigenvalue, symmetric_eigenvalues};
pub use matrix::{pauli, tensor, ComplexMatrix};
pub use state::{expectation, partial_transpose, pm_projectors, DensityMatrix, Ket};

/// Hilbert-space dimension of one photon's path and polarization.
pub const DIM: usize = 4;

/// Tolerance for structural identities (Hermiticity, normalization, products).
pub const STRUCTURAL_TOL: f64 = 1e-12;

/// Tolerance for derived spectra and residues.
pub const SPECTRAL_TOL: f64 = 1e-10;

/// Optical mode index for a path (`0 = t`, `1 = r`) and polarization (`0 = H`, `1 = V`).
pub const fn mode(path: usize, polarization: usize) -> usize {
    2 * path + polarization
}
