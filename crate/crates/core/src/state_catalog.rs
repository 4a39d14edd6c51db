//! The twenty reference states and their entanglement classification.
//!
//! Pure states are given as kets in the `(tH, tV, rH, rV)` basis. Mixed states
//! are exact rational combinations of the four Bell states `ψ₁…ψ₄`.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
use num_rational::Ratio;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::qcore::{
    expectation, min_eigenvalue, partial_transpose, pauli, symmetric_eigenvalues, tensor, DensityMatrix, Ket,
    SPECTRAL_TOL,
};

pub type Weight = Ratio<u32>;

/// CHSH values above `2 + CHSH_TOL` count as a violation.
pub const CHSH_TOL: f64 = 1e-9;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum StateKind {
    Pure,
    Mixed,
}

#[derive(Clone, Debug, PartialEq)]
pub struct StateSpec {
    /// ASCII id such as `psi1` or `rho20`.
    pub id: &'static str,
    /// Position in the catalog, 1-based.
    pub index: usize,
    pub kind: StateKind,
    /// Human-readable definition in bra-ket notation.
    pub definition: &'static str,
    pub pure_ket: Option<Ket>,
    pub mixture: Option<Vec<(&'static str, Weight)>>,
}

impl StateSpec {
    /// Id with Greek letter and subscript digits, e.g. `ψ₁₄`.
    pub fn pretty_id(&self) -> alloc::string::String {
        let (head, digits) = self.id.split_at(3);
        let greek = if head == "psi" { 'ψ' } else { 'ρ' };
        let sub: alloc::string::String =
            digits.chars().map(|d| char::from_u32(0x2080 + d.to_digit(10).unwrap_or(0)).unwrap_or(d)).collect();
        let mut s = greek.to_string();
        s.push_str(&sub);
        s
    }

    pub fn weights_f64(&self) -> Option<Vec<(&'static str, f64)>> {
        self.mixture.as_ref().map(|m| m.iter().map(|(id, w)| (*id, ratio_to_f64(*w))).collect())
    }
}

pub fn ratio_to_f64(w: Weight) -> f64 {
    f64::from(*w.numer()) / f64::from(*w.denom())
}

fn pure(id: &'static str, index: usize, definition: &'static str, amps: [(f64, f64); 4]) -> StateSpec {
    let ket =
        Ket::normalized(amps.iter().map(|&(re, im)| Complex64::new(re, im)).collect()).expect("catalog ket is nonzero");
    StateSpec { id, index, kind: StateKind::Pure, definition, pure_ket: Some(ket), mixture: None }
}

fn bell_mixture(id: &'static str, index: usize, definition: &'static str, main: Weight, rest: Weight) -> StateSpec {
    StateSpec {
        id,
        index,
        kind: StateKind::Mixed,
        definition,
        pure_ket: None,
        mixture: Some(vec![("psi1", main), ("psi2", rest), ("psi3", rest), ("psi4", rest)]),
    }
}

/// All twenty states in catalog order.
pub fn catalog() -> Vec<StateSpec> {
    const O: (f64, f64) = (0.0, 0.0);
    const R: (f64, f64) = (1.0, 0.0);
    const N: (f64, f64) = (-1.0, 0.0);
    const I: (f64, f64) = (0.0, 1.0);
    let w = |n, d| Weight::new(n, d);
    vec![
        pure("psi1", 1, "(|t,H> + |r,V>)/sqrt(2)", [R, O, O, R]),
        pure("psi2", 2, "(|t,H> - |r,V>)/sqrt(2)", [R, O, O, N]),
        pure("psi3", 3, "(|t,V> + |r,H>)/sqrt(2)", [O, R, R, O]),
        pure("psi4", 4, "(|t,V> - |r,H>)/sqrt(2)", [O, R, N, O]),
        bell_mixture("rho5", 5, "13/16 psi1 + 1/16 (psi2 + psi3 + psi4)", w(13, 16), w(1, 16)),
        bell_mixture("rho6", 6, "5/8 psi1 + 1/8 (psi2 + psi3 + psi4)", w(5, 8), w(1, 8)),
        bell_mixture("rho7", 7, "7/16 psi1 + 3/16 (psi2 + psi3 + psi4)", w(7, 16), w(3, 16)),
        pure("psi8", 8, "|t,H>", [R, O, O, O]),
        pure("psi9", 9, "|t,V>", [O, R, O, O]),
        pure("psi10", 10, "|r,H>", [O, O, R, O]),
        pure("psi11", 11, "|r,V>", [O, O, O, R]),
        pure("psi12", 12, "|t>(|H> + |V>)/sqrt(2)", [R, R, O, O]),
        pure("psi13", 13, "|t>(|H> + i|V>)/sqrt(2)", [R, I, O, O]),
        pure("psi14", 14, "(|t> + |r>)|H>/sqrt(2)", [R, O, R, O]),
        pure("psi15", 15, "(|t> + i|r>)|H>/sqrt(2)", [R, O, I, O]),
        pure("psi16", 16, "(|t> + |r>)(|H> + |V>)/2", [R, R, R, R]),
        pure("psi17", 17, "(|t> + i|r>)(|H> + |V>)/2", [R, R, I, I]),
        pure("psi18", 18, "(|t> + |r>)(|H> + i|V>)/2", [R, I, R, I]),
        pure("psi19", 19, "(|t> + i|r>)(|H> + i|V>)/2", [R, I, I, N]),
        bell_mixture("rho20", 20, "1/4 (psi1 + psi2 + psi3 + psi4)", w(1, 4), w(1, 4)),
    ]
}

/// Looks up a state by id (`psi14`, `rho20`), pretty id (`ψ₁₄`) or 1-based index.
pub fn find(id: &str) -> Result<StateSpec> {
    let all = catalog();
    let by_index = id.parse::<usize>().ok();
    all.into_iter()
        .find(|s| s.id == id || Some(s.index) == by_index || s.pretty_id() == id)
        .ok_or_else(|| Error::UnknownState(id.to_string()))
}

/// Density matrix of a spec; mixtures expand over their catalog components.
pub fn density(spec: &StateSpec) -> Result<DensityMatrix> {
    if let Some(ket) = &spec.pure_ket {
        return DensityMatrix::from_ket(ket);
    }
    let mixture = spec.mixture.as_ref().ok_or(Error::InvalidWeights)?;
    let total = mixture.iter().fold(Weight::new(0, 1), |acc, (_, w)| acc + w);
    if total != Weight::new(1, 1) || mixture.iter().any(|(_, w)| *w.numer() == 0) {
        return Err(Error::InvalidWeights);
    }
    let parts =
        mixture.iter().map(|(id, w)| Ok((ratio_to_f64(*w), density(&find(id)?)?))).collect::<Result<Vec<_>>>()?;
    let refs: Vec<(f64, &DensityMatrix)> = parts.iter().map(|(w, r)| (*w, r)).collect();
    DensityMatrix::mixture(&refs)
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct EntanglementReport {
    pub chsh_max: f64,
    pub ppt_min_eig: f64,
    pub is_ppt_separable: bool,
    pub violates_chsh: bool,
}

/// Correlation matrix `T_ij = Tr(ρ σ_i ⊗ σ_j)` over `i, j ∈ {x, y, z}`.
pub fn correlation_tensor(rho: &DensityMatrix) -> [[f64; 3]; 3] {
    let paulis = [pauli::x(), pauli::y(), pauli::z()];
    let mut t = [[0.0; 3]; 3];
    for (i, si) in paulis.iter().enumerate() {
        for (j, sj) in paulis.iter().enumerate() {
            t[i][j] = expectation(rho, &tensor(si, sj)).expect("Pauli products are Hermitian");
        }
    }
    t
}

/// Largest CHSH value reachable with optimal local settings: `2√(m₁ + m₂)`,
/// where `m₁ ≥ m₂` are the two largest eigenvalues of `TᵀT`.
pub fn chsh_max(rho: &DensityMatrix) -> f64 {
    let t = correlation_tensor(rho);
    let mut tt = [0.0; 9];
    for i in 0..3 {
        for j in 0..3 {
            tt[3 * i + j] = (0..3).map(|k| t[k][i] * t[k][j]).sum();
        }
    }
    let eig = symmetric_eigenvalues(&tt, 3);
    2.0 * (eig[2] + eig[1]).max(0.0).sqrt()
}

pub fn ppt_min_eig(rho: &DensityMatrix) -> f64 {
    min_eigenvalue(&partial_transpose(rho))
}

pub fn classify(rho: &DensityMatrix) -> EntanglementReport {
    let chsh_max = chsh_max(rho);
    let ppt_min_eig = ppt_min_eig(rho);
    EntanglementReport {
        chsh_max,
        ppt_min_eig,
        is_ppt_separable: ppt_min_eig >= -SPECTRAL_TOL,
        violates_chsh: chsh_max > 2.0 + CHSH_TOL,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::qcore::{hermitian_eigenvalues, ComplexMatrix};

    fn rho(id: &str) -> DensityMatrix {
        density(&find(id).unwrap()).unwrap()
    }

    #[test]
    fn catalog_shape() {
        let all = catalog();
        assert_eq!(all.len(), 20);
        for (i, s) in all.iter().enumerate() {
            assert_eq!(s.index, i + 1);
        }
        let mixed: Vec<_> = all.iter().filter(|s| s.kind == StateKind::Mixed).map(|s| s.index).collect();
        assert_eq!(mixed, [5, 6, 7, 20]);
    }

    #[test]
    fn psi1_and_psi13_amplitudes() {
        let s = core::f64::consts::FRAC_1_SQRT_2;
        let psi1 = find("psi1").unwrap().pure_ket.unwrap();
        let want = [s, 0.0, 0.0, s];
        for (a, w) in psi1.amplitudes().iter().zip(want) {
            assert!((a - Complex64::new(w, 0.0)).norm() < 1e-15);
        }
        let psi13 = find("psi13").unwrap().pure_ket.unwrap();
        assert!((psi13.amplitudes()[1] - Complex64::new(0.0, s)).norm() < 1e-15);
    }

    #[test]
    fn rho20_is_equal_bell_mixture() {
        let spec = find("rho20").unwrap();
        let mix = spec.mixture.unwrap();
        assert_eq!(mix.len(), 4);
        assert!(mix.iter().all(|(_, w)| *w == Weight::new(1, 4)));
    }

    #[test]
    fn lookup_variants() {
        assert_eq!(find("14").unwrap().id, "psi14");
        assert_eq!(find("ψ₁₄").unwrap().id, "psi14");
        assert_eq!(find("ρ₂₀").unwrap().id, "rho20");
        assert!(matches!(find("psi21"), Err(Error::UnknownState(_))));
    }

    #[test]
    fn unknown_component_is_reported() {
        let mut spec = find("rho5").unwrap();
        spec.mixture.as_mut().unwrap()[0].0 = "psi99";
        assert_eq!(density(&spec), Err(Error::UnknownState("psi99".into())));
    }

    #[test]
    fn bad_weights_are_rejected() {
        let mut spec = find("rho5").unwrap();
        spec.mixture.as_mut().unwrap()[0].1 = Weight::new(1, 2);
        assert_eq!(density(&spec), Err(Error::InvalidWeights));
    }

    #[test]
    fn psi8_is_basis_projector() {
        let m = rho("psi8");
        assert_eq!(*m.matrix(), Ket::basis(4, 0).projector());
    }

    #[test]
    fn rho20_is_maximally_mixed() {
        // Bell-basis completeness: Σ|ψ_j⟩⟨ψ_j|/4 = I/4
        let m = rho("rho20");
        assert!(m.matrix().max_abs_diff(&ComplexMatrix::identity(4).scale_real(0.25)) < 1e-12);
    }

    #[test]
    fn rho5_spectrum() {
        let eig = hermitian_eigenvalues(rho("rho5").matrix());
        let want = [1.0 / 16.0, 1.0 / 16.0, 1.0 / 16.0, 13.0 / 16.0];
        for (g, w) in eig.iter().zip(want) {
            assert!((g - w).abs() < 1e-10);
        }
    }

    #[test]
    fn chsh_values() {
        let two_root_two = 2.0 * 2.0_f64.sqrt();
        assert!((chsh_max(&rho("psi1")) - two_root_two).abs() < 1e-9);
        assert!((chsh_max(&rho("rho6")) - 2.0_f64.sqrt()).abs() < 1e-9);
        assert!(chsh_max(&rho("rho20")).abs() < 1e-12);
    }

    #[test]
    fn ppt_values() {
        assert!((ppt_min_eig(&rho("rho7")) - 1.0 / 16.0).abs() < 1e-10);
        assert!((ppt_min_eig(&rho("rho6")) + 1.0 / 8.0).abs() < 1e-10);
        for i in 8..=19 {
            assert!(ppt_min_eig(&rho(&alloc::format!("psi{i}"))) >= -1e-10);
        }
    }

    #[test]
    fn bell_states_orthonormal() {
        let kets: Vec<Ket> = (1..=4).map(|i| find(&alloc::format!("psi{i}")).unwrap().pure_ket.unwrap()).collect();
        for (i, a) in kets.iter().enumerate() {
            for (j, b) in kets.iter().enumerate() {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((a.inner(b) - Complex64::new(want, 0.0)).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn pretty_ids() {
        assert_eq!(find("psi1").unwrap().pretty_id(), "ψ₁");
        assert_eq!(find("rho20").unwrap().pretty_id(), "ρ₂₀");
    }
}
