//! The nine Peres-Mermin observables and their six measurement contexts.
//!
//! ```text
//!   A = σz⊗I     B = I⊗σz     C = σz⊗σz
//!   a = I⊗σx     b = σx⊗I     c = σx⊗σx
//!   α = σz⊗σx    β = σx⊗σz    γ = σy⊗σy
//! ```
//!
//! Rows and columns are the contexts. Every context multiplies to `+I` except
//! the third column, which multiplies to `-I`; that sign pattern is why the
//! quantum value of χ is 6 for every state.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::qcore::{pauli, tensor, ComplexMatrix, DIM, STRUCTURAL_TOL};

/// Observable label, in the canonical order `A, B, C, a, b, c, α, β, γ`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub enum Label {
    A,
    B,
    C,
    #[cfg_attr(feature = "serde", serde(rename = "a"))]
    SmallA,
    #[cfg_attr(feature = "serde", serde(rename = "b"))]
    SmallB,
    #[cfg_attr(feature = "serde", serde(rename = "c"))]
    SmallC,
    #[cfg_attr(feature = "serde", serde(rename = "alpha"))]
    Alpha,
    #[cfg_attr(feature = "serde", serde(rename = "beta"))]
    Beta,
    #[cfg_attr(feature = "serde", serde(rename = "gamma"))]
    Gamma,
}

impl Label {
    pub const ALL: [Label; 9] = [
        Label::A,
        Label::B,
        Label::C,
        Label::SmallA,
        Label::SmallB,
        Label::SmallC,
        Label::Alpha,
        Label::Beta,
        Label::Gamma,
    ];

    /// Position in the canonical order.
    pub fn index(self) -> usize {
        self as usize
    }

    pub fn symbol(self) -> &'static str {
        match self {
            Label::A => "A",
            Label::B => "B",
            Label::C => "C",
            Label::SmallA => "a",
            Label::SmallB => "b",
            Label::SmallC => "c",
            Label::Alpha => "α",
            Label::Beta => "β",
            Label::Gamma => "γ",
        }
    }

    /// ASCII name, usable in file formats and on the command line.
    pub fn ascii(self) -> &'static str {
        match self {
            Label::Alpha => "alpha",
            Label::Beta => "beta",
            Label::Gamma => "gamma",
            other => other.symbol(),
        }
    }

    /// Accepts either the symbol or the ASCII name.
    pub fn parse(s: &str) -> Option<Label> {
        Label::ALL.into_iter().find(|l| l.symbol() == s || l.ascii() == s)
    }

    /// `(path factor, polarization factor)` of the tensor-product operator.
    fn factors(self) -> (ComplexMatrix, ComplexMatrix) {
        use pauli::{id, x, y, z};
        match self {
            Label::A => (z(), id()),
            Label::B => (id(), z()),
            Label::C => (z(), z()),
            Label::SmallA => (id(), x()),
            Label::SmallB => (x(), id()),
            Label::SmallC => (x(), x()),
            Label::Alpha => (z(), x()),
            Label::Beta => (x(), z()),
            Label::Gamma => (y(), y()),
        }
    }

    pub fn operator(self) -> ComplexMatrix {
        let (path, polarization) = self.factors();
        tensor(&path, &polarization)
    }
}

impl fmt::Display for Label {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.symbol())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct PMObservable {
    pub label: Label,
    pub operator: ComplexMatrix,
}

/// A triple of compatible observables in measured order, with the sign its
/// correlation carries in χ.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
#[cfg_attr(feature = "serde", derive(serde::Serialize, serde::Deserialize))]
pub struct Context {
    pub ordered_labels: [Label; 3],
    pub sign: i8,
}

impl Context {
    pub const fn new(ordered_labels: [Label; 3], sign: i8) -> Self {
        Self { ordered_labels, sign }
    }

    /// Same context measured in a different order; `order` permutes positions.
    pub fn reordered(&self, order: [usize; 3]) -> Self {
        Self { ordered_labels: order.map(|i| self.ordered_labels[i]), sign: self.sign }
    }

    /// Compact name such as `CAB` or `βγα`.
    pub fn name(&self) -> alloc::string::String {
        self.ordered_labels.iter().map(|l| l.symbol()).collect()
    }

    pub fn ascii_name(&self) -> alloc::string::String {
        let parts: Vec<&str> = self.ordered_labels.iter().map(|l| l.ascii()).collect();
        parts.join("-")
    }
}

/// The six contexts in the order the correlations are reported:
/// `⟨CAB⟩ + ⟨cba⟩ + ⟨βγα⟩ + ⟨αAa⟩ + ⟨βbB⟩ − ⟨cγC⟩`.
pub const CONTEXTS: [Context; 6] = {
    use Label::*;
    [
        Context::new([C, A, B], 1),
        Context::new([SmallC, SmallB, SmallA], 1),
        Context::new([Beta, Gamma, Alpha], 1),
        Context::new([Alpha, A, SmallA], 1),
        Context::new([Beta, SmallB, B], 1),
        Context::new([SmallC, Gamma, C], -1),
    ]
};

pub fn contexts() -> [Context; 6] {
    CONTEXTS
}

/// The 3×3 arrangement: rows `ABC / abc / αβγ`, columns `Aaα / Bbβ / Ccγ`.
#[derive(Clone, Debug)]
pub struct PMSquare {
    grid: [[PMObservable; 3]; 3],
}

pub fn build_square() -> PMSquare {
    let cell = |label: Label| PMObservable { label, operator: label.operator() };
    use Label::*;
    PMSquare {
        grid: [
            [cell(A), cell(B), cell(C)],
            [cell(SmallA), cell(SmallB), cell(SmallC)],
            [cell(Alpha), cell(Beta), cell(Gamma)],
        ],
    }
}

impl PMSquare {
    pub fn grid(&self) -> &[[PMObservable; 3]; 3] {
        &self.grid
    }

    pub fn get(&self, label: Label) -> &PMObservable {
        let i = label.index();
        &self.grid[i / 3][i % 3]
    }

    pub fn operator(&self, label: Label) -> &ComplexMatrix {
        &self.get(label).operator
    }

    pub fn rows(&self) -> [[Label; 3]; 3] {
        core::array::from_fn(|r| core::array::from_fn(|c| self.grid[r][c].label))
    }

    pub fn columns(&self) -> [[Label; 3]; 3] {
        core::array::from_fn(|c| core::array::from_fn(|r| self.grid[r][c].label))
    }

    /// Ordered product `O₁O₂O₃` of a context's operators.
    pub fn context_product(&self, ctx: &Context) -> ComplexMatrix {
        let [l1, l2, l3] = ctx.ordered_labels;
        &(self.operator(l1) * self.operator(l2)) * self.operator(l3)
    }

    /// `Σ_k sign_k · O₁O₂O₃` over the six contexts; equals `6·I`.
    pub fn chi_operator(&self) -> ComplexMatrix {
        CONTEXTS.iter().fold(ComplexMatrix::zeros(DIM), |acc, ctx| {
            &acc + &self.context_product(ctx).scale_real(f64::from(ctx.sign))
        })
    }
}

/// Returns `s ∈ {−1, +1}` with `O₁O₂O₃ = s·I`.
pub fn context_product_sign(square: &PMSquare, ctx: &Context) -> Result<i8> {
    let product = square.context_product(ctx);
    let id = ComplexMatrix::identity(DIM);
    for s in [1i8, -1] {
        if product.max_abs_diff(&id.scale_real(f64::from(s))) < STRUCTURAL_TOL {
            return Ok(s);
        }
    }
    let deviation = product.max_abs_diff(&id).min(product.max_abs_diff(&id.scale_real(-1.0)));
    Err(Error::NotProportionalToIdentity { deviation })
}

/// Frobenius norm of `[O₁, O₂]`.
pub fn commutator_norm(square: &PMSquare, first: Label, second: Label) -> f64 {
    square.operator(first).commutator(square.operator(second)).norm()
}

#[derive(Clone, Debug, PartialEq)]
pub struct IncompatiblePair {
    pub first: Label,
    pub second: Label,
    pub commutator_norm: f64,
    /// Frobenius norm of the anticommutator; zero for every Peres-Mermin pair
    /// that shares no context.
    pub anticommutator_norm: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CompatibilityReport {
    /// Largest `‖[Oᵢ, Oⱼ]‖` over pairs sharing a row or column.
    pub max_context_commutator: f64,
    /// Smallest `‖[Oᵢ, Oⱼ]‖` over pairs sharing no row or column.
    pub min_incompatible_commutator: f64,
    pub incompatible_pairs: Vec<IncompatiblePair>,
}

impl CompatibilityReport {
    pub fn contexts_commute(&self) -> bool {
        self.max_context_commutator < STRUCTURAL_TOL
    }
}

pub fn verify_compatibility(square: &PMSquare) -> CompatibilityReport {
    let lines: Vec<[Label; 3]> = square.rows().into_iter().chain(square.columns()).collect();
    let share_line = |x: Label, y: Label| lines.iter().any(|l| l.contains(&x) && l.contains(&y));

    let mut max_context_commutator = 0.0_f64;
    let mut min_incompatible_commutator = f64::INFINITY;
    let mut incompatible_pairs = Vec::new();
    for (i, &first) in Label::ALL.iter().enumerate() {
        for &second in &Label::ALL[i + 1..] {
            let norm = commutator_norm(square, first, second);
            if share_line(first, second) {
                max_context_commutator = max_context_commutator.max(norm);
            } else {
                let (x, y) = (square.operator(first), square.operator(second));
                let anticommutator_norm = (&(x * y) + &(y * x)).norm();
                min_incompatible_commutator = min_incompatible_commutator.min(norm);
                incompatible_pairs.push(IncompatiblePair { first, second, commutator_norm: norm, anticommutator_norm });
            }
        }
    }
    CompatibilityReport { max_context_commutator, min_incompatible_commutator, incompatible_pairs }
}
