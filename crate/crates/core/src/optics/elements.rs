use core::f64::consts::PI;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::qcore::{mode, ComplexMatrix, DIM};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "UPPERCASE"))]
pub enum ElementKind {
    /// Half-wave plate; parameter is the fast-axis angle.
    Hwp,
    /// Quarter-wave plate; parameter is the fast-axis angle.
    Qwp,
    /// Polarizing beam splitter coupling the two paths.
    Pbs,
    /// Symmetric 50/50 beam splitter coupling the two paths.
    Bs,
    /// Phase delay on one path; parameter is the phase.
    Wedge,
}

impl ElementKind {
    pub fn name(self) -> &'static str {
        match self {
            ElementKind::Hwp => "HWP",
            ElementKind::Qwp => "QWP",
            ElementKind::Pbs => "PBS",
            ElementKind::Bs => "BS",
            ElementKind::Wedge => "W",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
#[cfg_attr(feature = "serde", serde(rename_all = "lowercase"))]
pub enum Location {
    /// Transmitted path.
    T,
    /// Reflected path.
    R,
    /// Both paths: the coupler for BS/PBS, identical plates for HWP/QWP.
    Both,
}

impl Location {
    fn covers(self, path: usize) -> bool {
        match self {
            Location::T => path == 0,
            Location::R => path == 1,
            Location::Both => true,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Element {
    pub kind: ElementKind,
    pub location: Location,
    /// Fast-axis angle in `[0, π)` for wave plates, phase in `[0, 2π)` for
    /// wedges, ignored for beam splitters.
    pub parameter: f64,
}

impl Element {
    pub fn new(kind: ElementKind, location: Location, parameter: f64) -> Result<Self> {
        let e = Self { kind, location, parameter };
        e.validate()?;
        Ok(e)
    }

    pub fn hwp(location: Location, angle: f64) -> Self {
        Self { kind: ElementKind::Hwp, location, parameter: wrap(angle, PI) }
    }

    pub fn qwp(location: Location, angle: f64) -> Self {
        Self { kind: ElementKind::Qwp, location, parameter: wrap(angle, PI) }
    }

    pub fn wedge(location: Location, phase: f64) -> Self {
        Self { kind: ElementKind::Wedge, location, parameter: wrap(phase, 2.0 * PI) }
    }

    pub fn bs() -> Self {
        Self { kind: ElementKind::Bs, location: Location::Both, parameter: 0.0 }
    }

    pub fn pbs() -> Self {
        Self { kind: ElementKind::Pbs, location: Location::Both, parameter: 0.0 }
    }

    pub fn validate(&self) -> Result<()> {
        let upper = match self.kind {
            ElementKind::Hwp | ElementKind::Qwp => PI,
            ElementKind::Wedge => 2.0 * PI,
            ElementKind::Bs | ElementKind::Pbs => {
                return if self.location == Location::Both {
                    Ok(())
                } else {
                    Err(Error::ParameterOutOfRange { kind: self.kind.name(), value: self.parameter })
                };
            }
        };
        if (0.0..upper).contains(&self.parameter) {
            Ok(())
        } else {
            Err(Error::ParameterOutOfRange { kind: self.kind.name(), value: self.parameter })
        }
    }
}

/// Reduces `x` into `[0, period)`.
pub(crate) fn wrap(x: f64, period: f64) -> f64 {
    let r = x - period * (x / period).floor();
    if r >= period {
        0.0
    } else {
        r
    }
}

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

/// Jones matrix of a half-wave plate: `[[cos2θ, sin2θ], [sin2θ, −cos2θ]]`.
pub fn hwp_jones(angle: f64) -> [[Complex64; 2]; 2] {
    let (s, co) = (2.0 * angle).sin_cos();
    [[c(co, 0.0), c(s, 0.0)], [c(s, 0.0), c(-co, 0.0)]]
}

/// Jones matrix of a quarter-wave plate: `R(θ)·diag(1, i)·R(−θ)`.
pub fn qwp_jones(angle: f64) -> [[Complex64; 2]; 2] {
    let (s, co) = angle.sin_cos();
    let i = c(0.0, 1.0);
    let one = c(1.0, 0.0);
    // R(θ) diag(1,i) R(-θ) expanded entrywise
    [[one * (co * co) + i * (s * s), (one - i) * (co * s)], [(one - i) * (co * s), one * (s * s) + i * (co * co)]]
}

fn polarization_block(jones: [[Complex64; 2]; 2], location: Location) -> ComplexMatrix {
    let mut u = ComplexMatrix::identity(DIM);
    for path in 0..2 {
        if !location.covers(path) {
            continue;
        }
        for p in 0..2 {
            for q in 0..2 {
                u[(mode(path, p), mode(path, q))] = jones[p][q];
            }
        }
    }
    u
}

/// 4×4 unitary of an element in the `(tH, tV, rH, rV)` basis.
///
/// * PBS transmits `H` (path unchanged) and reflects `V` into the other path
///   with phase `i`, keeping the polarization label.
/// * BS is `(1/√2)[[1, i], [i, 1]]` on `(t, r)` for each polarization.
/// * A wedge multiplies its path by `e^{iφ}`.
pub fn element_unitary(e: &Element) -> ComplexMatrix {
    match e.kind {
        ElementKind::Hwp => polarization_block(hwp_jones(e.parameter), e.location),
        ElementKind::Qwp => polarization_block(qwp_jones(e.parameter), e.location),
        ElementKind::Wedge => {
            let phase = Complex64::from_polar(1.0, e.parameter);
            let mut u = ComplexMatrix::identity(DIM);
            for path in 0..2 {
                if e.location.covers(path) {
                    for p in 0..2 {
                        u[(mode(path, p), mode(path, p))] = phase;
                    }
                }
            }
            u
        }
        ElementKind::Pbs => {
            let mut u = ComplexMatrix::zeros(DIM);
            u[(mode(0, 0), mode(0, 0))] = c(1.0, 0.0);
            u[(mode(1, 0), mode(1, 0))] = c(1.0, 0.0);
            u[(mode(1, 1), mode(0, 1))] = c(0.0, 1.0);
            u[(mode(0, 1), mode(1, 1))] = c(0.0, 1.0);
            u
        }
        ElementKind::Bs => {
            let h = core::f64::consts::FRAC_1_SQRT_2;
            let mut u = ComplexMatrix::zeros(DIM);
            for p in 0..2 {
                u[(mode(0, p), mode(0, p))] = c(h, 0.0);
                u[(mode(0, p), mode(1, p))] = c(0.0, h);
                u[(mode(1, p), mode(0, p))] = c(0.0, h);
                u[(mode(1, p), mode(1, p))] = c(h, 0.0);
            }
            u
        }
    }
}

/// Product `U_n ⋯ U_1` of an ordered element list (first element acts first).
pub fn compose(elements: &[Element]) -> ComplexMatrix {
    elements.iter().fold(ComplexMatrix::identity(DIM), |acc, e| &element_unitary(e) * &acc)
}
