//! State preparation: an `H` photon in path `t` passes a HWP and a PBS (which
//! splits it over the two paths), a wedge on `r`, then a HWP followed by a QWP
//! in each path.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use super::elements::{compose, wrap, Element, Location};
use crate::error::{Error, Result};
use crate::qcore::{Ket, DIM, STRUCTURAL_TOL};

/// Minimum fidelity a solved preparation must reach.
pub const PREPARATION_FIDELITY: f64 = 1.0 - 1e-9;

#[derive(Clone, Copy, Debug, Default, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct PreparationParams {
    /// HWP angle in front of the PBS; sets the path amplitudes.
    pub theta0: f64,
    /// Wedge phase on path `r`.
    pub wedge_phase: f64,
    pub t_hwp: f64,
    pub t_qwp: f64,
    pub r_hwp: f64,
    pub r_qwp: f64,
}

impl PreparationParams {
    pub fn validate(&self) -> Result<()> {
        self.netlist().iter().try_for_each(Element::validate)
    }

    /// Element chain in propagation order.
    pub fn netlist(&self) -> Vec<Element> {
        vec![
            Element { kind: super::ElementKind::Hwp, location: Location::T, parameter: self.theta0 },
            Element::pbs(),
            Element { kind: super::ElementKind::Wedge, location: Location::R, parameter: self.wedge_phase },
            Element { kind: super::ElementKind::Hwp, location: Location::T, parameter: self.t_hwp },
            Element { kind: super::ElementKind::Qwp, location: Location::T, parameter: self.t_qwp },
            Element { kind: super::ElementKind::Hwp, location: Location::R, parameter: self.r_hwp },
            Element { kind: super::ElementKind::Qwp, location: Location::R, parameter: self.r_qwp },
        ]
    }
}

/// Propagates `|t,H⟩` through the preparation optics.
pub fn prepare(params: &PreparationParams) -> Result<Ket> {
    params.validate()?;
    let u = compose(&params.netlist());
    let input = Ket::basis(DIM, 0);
    Ket::normalized(u.apply(input.amplitudes()))
}

fn unit(v: [Complex64; 2]) -> Option<[Complex64; 2]> {
    let n = (v[0].norm_sqr() + v[1].norm_sqr()).sqrt();
    (n > STRUCTURAL_TOL).then(|| [v[0] / n, v[1] / n])
}

/// QWP and HWP angles for one ellipse-axis choice; `None` if the target is not
/// in quadrature along that axis.
fn plates_for_axis(target: [Complex64; 2], axis: f64, input_vertical: bool) -> Option<(f64, f64)> {
    let [a, b] = target;
    let (sq, cq) = axis.sin_cos();
    let along = a * cq + b * sq;
    let across = -a * sq + b * cq;
    let offset = if along.norm() < STRUCTURAL_TOL {
        FRAC_PI_2
    } else {
        let ratio = across / along;
        if ratio.re.abs() > 1e-9 {
            return None;
        }
        ratio.im.atan()
    };
    let linear = axis + offset;
    let hwp = if input_vertical { 0.5 * (linear + FRAC_PI_2) } else { 0.5 * linear };
    // HWP(h + π/2) = −HWP(h); the sign is absorbed by the wedge.
    Some((wrap(hwp, FRAC_PI_2), wrap(axis, PI)))
}

/// Plate angles `(hwp, qwp)` taking linear input polarization (`H` when
/// `input_vertical` is false, else `V`) to the Jones vector `target` up to phase.
///
/// The QWP fast axis goes on a principal axis of the target ellipse and the
/// HWP rotates the input onto the linear polarization the QWP turns into that
/// ellipse. Among valid settings the one closest to bare plates is kept.
fn solve_plates(target: [Complex64; 2], input_vertical: bool) -> (f64, f64) {
    let [a, b] = target;
    let s1 = a.norm_sqr() - b.norm_sqr();
    let s2 = 2.0 * (a.conj() * b).re;
    let axes: Vec<f64> = if s1.abs() < STRUCTURAL_TOL && s2.abs() < STRUCTURAL_TOL {
        // circular: every axis is principal
        vec![0.0, 0.25 * PI, 0.5 * PI, 0.75 * PI]
    } else {
        let major = 0.5 * s2.atan2(s1);
        vec![major, major + FRAC_PI_2]
    };
    let distance = |h: f64| h.min(PI - h);
    axes.into_iter()
        .filter_map(|axis| plates_for_axis(target, axis, input_vertical))
        .min_by(|x, y| {
            let key = |p: &(f64, f64)| (distance(p.0), distance(p.1));
            key(x).partial_cmp(&key(y)).unwrap_or(core::cmp::Ordering::Equal)
        })
        .unwrap_or((0.0, 0.0))
}

/// Finds preparation settings reproducing `target` up to a global phase.
pub fn solve_preparation(target: &Ket) -> Result<PreparationParams> {
    if target.dim() != DIM {
        return Err(Error::DimensionMismatch { expected: DIM, found: target.dim() });
    }
    let amps = target.amplitudes();
    let t_part = [amps[0], amps[1]];
    let r_part = [amps[2], amps[3]];
    let t_norm = (t_part[0].norm_sqr() + t_part[1].norm_sqr()).sqrt();
    let r_norm = (r_part[0].norm_sqr() + r_part[1].norm_sqr()).sqrt();

    let mut params = PreparationParams { theta0: wrap(0.5 * r_norm.atan2(t_norm), PI), ..PreparationParams::default() };
    // After the PBS, path t carries H and path r carries V.
    if let Some(t_pol) = unit(t_part) {
        (params.t_hwp, params.t_qwp) = solve_plates(t_pol, false);
    }
    if let Some(r_pol) = unit(r_part) {
        (params.r_hwp, params.r_qwp) = solve_plates(r_pol, true);
    }

    // Fix the relative phase between the paths with the wedge.
    let trial = prepare(&params)?;
    let out = trial.amplitudes();
    let overlap_t = out[0].conj() * amps[0] + out[1].conj() * amps[1];
    let overlap_r = out[2].conj() * amps[2] + out[3].conj() * amps[3];
    if overlap_t.norm() > STRUCTURAL_TOL && overlap_r.norm() > STRUCTURAL_TOL {
        params.wedge_phase = wrap(overlap_r.arg() - overlap_t.arg(), 2.0 * PI);
    }

    let fidelity = prepare(&params)?.fidelity(target);
    if fidelity < PREPARATION_FIDELITY {
        return Err(Error::Unreachable { fidelity });
    }
    Ok(params)
}
