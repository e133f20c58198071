//! Crate-wide error type and result alias.

use thiserror::Error;

/// Every fallible operation in the crate returns this error type.
///
/// Variants are grouped by how the command-line front end maps them to exit
/// codes: input/parse problems (exit 2), validation failures (exit 3),
/// solver non-convergence (exit 4), and infeasible tasks (exit 5).
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix is not Hermitian: asymmetry {deviation:.3e}")]
    NotHermitian { deviation: f64 },

    #[error("matrix is not positive semidefinite: min eigenvalue {min_eigenvalue:.3e}")]
    NotPositive { min_eigenvalue: f64 },

    #[error("matrix trace {trace:.12} is not 1 within tolerance")]
    TraceNotOne { trace: f64 },

    #[error("not a probability distribution: {reason}")]
    NotDistribution { reason: String },

    #[error("matrix is not square: {rows}x{cols}")]
    NotSquare { rows: usize, cols: usize },

    #[error("matrix contains non-finite entries")]
    NonFinite,

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("operation requires dimension {expected}, found {found}")]
    WrongDimension { expected: usize, found: usize },

    #[error("wrong number of items: expected {expected}, found {found}")]
    WrongCount { expected: usize, found: usize },

    #[error("parameter {what} = {value} is out of range")]
    OutOfRange { what: &'static str, value: f64 },

    #[error("Bloch vector norm {norm:.12} exceeds 1")]
    VectorOutsideBall { norm: f64 },

    #[error("dimension {required} exceeds the configured cap {cap}")]
    DimensionCapExceeded { required: usize, cap: usize },

    #[error("{what} did not converge within {iterations} iterations")]
    NoConvergence { what: &'static str, iterations: usize },

    #[error("optimality certificate failed: worst residual {worst_residual:.3e} > {tolerance:.3e}")]
    CertificateFailed { worst_residual: f64, tolerance: f64 },

    #[error("measurement reconstruction failed: residual {residual:.3e}")]
    ReconstructionFailed { residual: f64 },

    #[error("task is infeasible: {reason}")]
    Infeasible { reason: String },

    #[error("ensemble average has empty support")]
    SingularEnsemble,

    #[error("invalid operator: {reason}")]
    InvalidOperator { reason: String },

    #[error("outcome {outcome} has zero click probability")]
    ZeroClickProbability { outcome: usize },

    #[error("bad coefficient vector: {reason}")]
    BadCoefficients { reason: String },

    #[error("probability table is missing ordered pairs: {missing:?}")]
    MissingPairs { missing: Vec<(usize, usize)> },

    #[error("matrix is not unitary: deviation {deviation:.3e}")]
    NotUnitary { deviation: f64 },

    #[error("state is not pure: purity {purity:.12}")]
    NotPure { purity: f64 },

    #[error("measurement elements do not sum to identity: deviation {deviation:.3e}")]
    IncompleteMeasurement { deviation: f64 },

    #[error("no repetition count up to {cap} achieves perfect discrimination")]
    RepetitionNotFound { cap: usize },

    #[error("parse error: {detail}")]
    ParseError { detail: String },

    #[error("invalid scenario: {detail}")]
    ValidationError { detail: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Exit code the command-line interface reports for this error.
    ///
    /// 2 = unreadable or unparsable input, 3 = input fails validation,
    /// 4 = a solver gave up before its certificate passed, 5 = the task is
    /// infeasible for the given input.
    pub fn exit_code(&self) -> i32 {
        use Error::*;
        match self {
            ParseError { .. } | Io(_) | Json(_) | Csv(_) => 2,
            NoConvergence { .. } | CertificateFailed { .. } | ReconstructionFailed { .. } => 4,
            Infeasible { .. } | RepetitionNotFound { .. } => 5,
            _ => 3,
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
