//! Single-observable measuring devices.
//!
//! A device is an element chain (the analysis optics) that routes each
//! eigenspace of its observable onto a fixed set of output modes. Each output
//! port then carries the mirrored optics, which recreate the eigenstate before
//! the photon enters the next device. Compiled, a device must act on states
//! exactly as the Lüders instrument `ρ ↦ P_± ρ P_±` of its observable.

use alloc::sync::Arc;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_4, FRAC_PI_8};

use num_complex::Complex64;

use super::elements::{compose, element_unitary, Element, ElementKind, Location};
use crate::error::{Error, Result};
use crate::pm_square::Label;
use crate::qcore::{pm_projectors, ComplexMatrix, Ket, DIM};

/// Maximum deviation between a compiled device and the Lüders instrument.
pub const INSTRUMENT_TOL: f64 = 1e-10;

/// Assignment of output modes to the `+1` and `−1` outcomes.
#[derive(Clone, Debug, PartialEq, Eq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct OutcomeMap {
    pub plus: Vec<usize>,
    pub minus: Vec<usize>,
}

impl OutcomeMap {
    pub fn new(plus: &[usize], minus: &[usize]) -> Result<Self> {
        let map = Self { plus: plus.to_vec(), minus: minus.to_vec() };
        map.validate()?;
        Ok(map)
    }

    pub fn validate(&self) -> Result<()> {
        if self.plus.is_empty() || self.minus.is_empty() {
            return Err(Error::InvalidOutcomeMap("outcome sets must be nonempty"));
        }
        let mut seen = [false; DIM];
        for &m in self.plus.iter().chain(&self.minus) {
            if m >= DIM {
                return Err(Error::InvalidOutcomeMap("mode index out of range"));
            }
            if seen[m] {
                return Err(Error::InvalidOutcomeMap("outcome sets overlap"));
            }
            seen[m] = true;
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::InvalidOutcomeMap("outcome sets do not cover all modes"));
        }
        Ok(())
    }

    /// Modes of a branch; branch 0 is `+1`, branch 1 is `−1`.
    pub fn branch(&self, branch: usize) -> &[usize] {
        if branch == 0 {
            &self.plus
        } else {
            &self.minus
        }
    }

    /// Orthogonal projector onto the modes of a branch.
    pub fn projector(&self, branch: usize) -> ComplexMatrix {
        let mut p = ComplexMatrix::zeros(DIM);
        for &m in self.branch(branch) {
            p[(m, m)] = Complex64::new(1.0, 0.0);
        }
        p
    }
}

#[derive(Clone, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct DeviceNetlist {
    pub observable_label: Label,
    pub elements: Vec<Element>,
    pub outcome_map: OutcomeMap,
    /// True when the device contains a beam-splitter interference stage.
    pub phase_sensitive: bool,
}

fn bell_analyzer() -> Vec<Element> {
    // HWP(π/4) in r flips the polarization there, turning the Bell states into
    // (|t⟩ ± |r⟩)|H⟩ and (|t⟩ ± |r⟩)|V⟩; the wedge and BS then send
    // (|t⟩ + |r⟩) to t and (|t⟩ − |r⟩) to r. Result: Φ⁺→tH, Ψ⁺→tV, Φ⁻→rH, Ψ⁻→rV.
    vec![
        Element::hwp(Location::R, FRAC_PI_4),
        Element::wedge(Location::R, 3.0 * core::f64::consts::FRAC_PI_2),
        Element::bs(),
    ]
}

fn path_interferometer() -> Vec<Element> {
    vec![Element::wedge(Location::R, 3.0 * core::f64::consts::FRAC_PI_2), Element::bs()]
}

/// Element list and outcome map of the device measuring `label`.
pub fn device_netlist(label: Label) -> DeviceNetlist {
    const T_MODES: [usize; 2] = [0, 1];
    const R_MODES: [usize; 2] = [2, 3];
    const H_MODES: [usize; 2] = [0, 2];
    const V_MODES: [usize; 2] = [1, 3];
    let hadamard = Element::hwp(Location::Both, FRAC_PI_8);

    let (elements, plus, minus): (Vec<Element>, &[usize], &[usize]) = match label {
        Label::A => (vec![], &T_MODES, &R_MODES),
        Label::B => (vec![], &H_MODES, &V_MODES),
        Label::SmallA => (vec![hadamard], &H_MODES, &V_MODES),
        Label::SmallB => (path_interferometer(), &T_MODES, &R_MODES),
        // Bell analyzer outputs: tH = Φ⁺, tV = Ψ⁺, rH = Φ⁻, rV = Ψ⁻
        Label::C => (bell_analyzer(), &H_MODES, &V_MODES),
        Label::SmallC => (bell_analyzer(), &T_MODES, &R_MODES),
        Label::Gamma => (bell_analyzer(), &[1, 2], &[0, 3]),
        Label::Alpha => ([vec![hadamard], bell_analyzer()].concat(), &H_MODES, &V_MODES),
        Label::Beta => ([vec![hadamard], bell_analyzer()].concat(), &T_MODES, &R_MODES),
    };
    let phase_sensitive = elements.iter().any(|e| e.kind == ElementKind::Bs);
    DeviceNetlist {
        observable_label: label,
        elements,
        outcome_map: OutcomeMap { plus: plus.to_vec(), minus: minus.to_vec() },
        phase_sensitive,
    }
}

/// Reads the outcome map off the optics: mode `k` belongs to the eigenvalue
/// of the observable on `U†|k⟩`. `None` if some mode is not fed by an eigenstate.
pub fn infer_outcome_map(label: Label, elements: &[Element]) -> Option<OutcomeMap> {
    let u_dag = compose(elements).adjoint();
    let observable = label.operator();
    let mut plus = Vec::new();
    let mut minus = Vec::new();
    for k in 0..DIM {
        let source = Ket::new(u_dag.apply(Ket::basis(DIM, k).amplitudes())).ok()?;
        let image = Ket::new(observable.apply(source.amplitudes())).ok()?;
        let overlap = source.inner(&image);
        if (overlap - Complex64::new(1.0, 0.0)).norm() < INSTRUMENT_TOL {
            plus.push(k);
        } else if (overlap + Complex64::new(1.0, 0.0)).norm() < INSTRUMENT_TOL {
            minus.push(k);
        } else {
            return None;
        }
    }
    Some(OutcomeMap { plus, minus })
}

#[derive(Clone, Debug)]
pub struct MeasurementDevice {
    pub label: Label,
    pub netlist: DeviceNetlist,
    pub analysis_unitary: ComplexMatrix,
    pub outcome_map: OutcomeMap,
    /// Recreation optics behind the `+1` and `−1` output ports.
    pub restore_unitaries: [ComplexMatrix; 2],
    pub phase_sensitive: bool,
    mode_projectors: [ComplexMatrix; 2],
}

impl MeasurementDevice {
    /// Unnormalized post-measurement operators of both branches:
    /// analysis, projection onto the branch modes, then restoration.
    pub fn branches(&self, rho: &ComplexMatrix) -> [ComplexMatrix; 2] {
        let analysed = self.analysis_unitary.conjugate(rho);
        core::array::from_fn(|b| {
            let projected = self.mode_projectors[b].conjugate(&analysed);
            self.restore_unitaries[b].conjugate(&projected)
        })
    }

    /// Effective operator `R_b Π_b U` of a branch.
    pub fn branch_operator(&self, branch: usize) -> ComplexMatrix {
        &(&self.restore_unitaries[branch] * &self.mode_projectors[branch]) * &self.analysis_unitary
    }

    /// Largest deviation of either branch from the observable's Lüders
    /// projector, after removing an irrelevant global phase.
    pub fn instrument_deviation(&self) -> f64 {
        let (plus, minus) = pm_projectors(&self.label.operator()).expect("observables are involutions");
        [plus, minus]
            .iter()
            .enumerate()
            .map(|(b, projector)| {
                let k = self.branch_operator(b);
                let overlap = (projector * &k).trace();
                let phase = if overlap.norm() > 0.0 { overlap / overlap.norm() } else { Complex64::new(1.0, 0.0) };
                k.max_abs_diff(&projector.scale(phase))
            })
            .fold(0.0, f64::max)
    }
}

fn mirrored(elements: &[Element]) -> ComplexMatrix {
    elements.iter().rev().fold(ComplexMatrix::identity(DIM), |acc, e| &element_unitary(e).adjoint() * &acc)
}

/// Compiles a netlist and checks it realizes the Lüders instrument.
pub fn compile_device(netlist: &DeviceNetlist) -> Result<MeasurementDevice> {
    let label = netlist.observable_label;
    netlist.outcome_map.validate()?;
    netlist.elements.iter().try_for_each(Element::validate)?;

    let analysis_unitary = compose(&netlist.elements);
    let deviation = analysis_unitary.unitary_deviation();
    if deviation > INSTRUMENT_TOL {
        return Err(Error::NotUnitary { label: label.ascii(), deviation });
    }
    let restore = mirrored(&netlist.elements);
    let device = MeasurementDevice {
        label,
        netlist: netlist.clone(),
        analysis_unitary,
        outcome_map: netlist.outcome_map.clone(),
        restore_unitaries: [restore.clone(), restore],
        phase_sensitive: netlist.phase_sensitive,
        mode_projectors: [netlist.outcome_map.projector(0), netlist.outcome_map.projector(1)],
    };
    let deviation = device.instrument_deviation();
    if deviation > INSTRUMENT_TOL {
        return Err(Error::InstrumentMismatch { label: label.ascii(), deviation });
    }
    Ok(device)
}

/// One compiled device per observable, shared by every context using it.
#[derive(Clone, Debug)]
pub struct DeviceBank {
    devices: [Arc<MeasurementDevice>; 9],
}

impl DeviceBank {
    pub fn compile() -> Result<Self> {
        let compiled =
            Label::ALL.iter().map(|&l| compile_device(&device_netlist(l)).map(Arc::new)).collect::<Result<Vec<_>>>()?;
        let devices: [Arc<MeasurementDevice>; 9] = compiled.try_into().expect("nine labels");
        Ok(Self { devices })
    }

    pub fn get(&self, label: Label) -> &Arc<MeasurementDevice> {
        &self.devices[label.index()]
    }

    pub fn iter(&self) -> impl Iterator<Item = &Arc<MeasurementDevice>> {
        self.devices.iter()
    }
}
