use alloc::string::String;

/// Errors raised by the core library.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operator is not Hermitian (max deviation {deviation:e})")]
    NotHermitian { deviation: f64 },

    #[error("operator does not square to the identity (max deviation {deviation:e})")]
    NotInvolution { deviation: f64 },

    #[error("ket is not normalized (norm² = {norm_sqr})")]
    NotNormalized { norm_sqr: f64 },

    #[error("trace is {trace}, expected 1")]
    TraceNotOne { trace: f64 },

    #[error("matrix is not positive semidefinite (min eigenvalue {min_eigenvalue:e})")]
    NotPositive { min_eigenvalue: f64 },

    #[error("expectation value has imaginary residue {residue:e}")]
    ImaginaryResidue { residue: f64 },

    #[error("product of context operators is not ±I (deviation {deviation:e})")]
    NotProportionalToIdentity { deviation: f64 },

    #[error("unknown state id `{0}`")]
    UnknownState(String),

    #[error("mixture weights must be positive and sum to 1")]
    InvalidWeights,

    #[error("target ket cannot be prepared (fidelity {fidelity})")]
    Unreachable { fidelity: f64 },

    #[error("element parameter {value} out of range for {kind}")]
    ParameterOutOfRange { kind: &'static str, value: f64 },

    #[error("invalid outcome map: {0}")]
    InvalidOutcomeMap(&'static str),

    #[error("compiled device for `{label}` is not the Lüders instrument (deviation {deviation:e})")]
    InstrumentMismatch { label: &'static str, deviation: f64 },

    #[error("analysis unitary for `{label}` is not unitary (deviation {deviation:e})")]
    NotUnitary { label: &'static str, deviation: f64 },

    #[error("invalid noise model: {0}")]
    InvalidNoise(&'static str),

    #[error("shot count must be at least 1")]
    ZeroShots,

    #[error("no counts recorded")]
    EmptyCounts,

    #[error("results to combine do not share a configuration")]
    MismatchedConfigs,

    #[error("noncontextual bound is {0}, expected 4")]
    BoundViolated(i32),
}

pub type Result<T> = core::result::Result<T, Error>;
