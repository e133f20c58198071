//! Optimal discrimination of quantum states.
//!
//! Given a source that prepares one of several known quantum states with
//! known prior probabilities, this crate computes the measurements that
//! identify the prepared state optimally under several figures of merit:
//!
//! - [`minerror`]: maximize the probability of guessing correctly, with
//!   closed forms for two states, geometrically uniform families and
//!   mirror-symmetric triples, a fixed-point solver for everything else,
//!   and a dual (KKT) certificate that makes every answer checkable.
//! - [`qubit`]: exact qubit solutions by reducing the dual program to a
//!   minimum enclosing ball of balls in Bloch space.
//! - [`strategies`]: unambiguous discrimination, maximum-confidence
//!   measurements, and the fixed-inconclusive-rate family between them.
//! - [`asymptotics`]: quantum and classical Chernoff exponents, exact
//!   finite-copy error curves, and repeated-measurement comparisons.
//! - [`applications`]: dimension witnesses, certified min-entropy,
//!   no-signaling saturation and steering, state exclusion, unitary-channel
//!   discrimination, and accessible-information bounds.
//! - [`scenario`]: a JSON scenario front end used by the `qsd` binary.
//!
//! Matrices are `ndarray` arrays of `num_complex::Complex64`; every solver
//! output carries enough dual information to verify optimality
//! independently of how it was found.

pub mod applications;
pub mod asymptotics;
pub mod error;
pub mod families;
pub mod linalg;
pub mod minerror;
pub mod operator;
pub(crate) mod optim;
pub mod qubit;
pub mod scenario;
pub mod strategies;

pub use error::{Error, Result};
pub use linalg::CMatrix;
pub use operator::{BlochVector, DensityMatrix, Eigensystem, Ensemble, Povm};

/// Default numerical tolerances, overridable per call where an operation
/// takes an explicit tolerance argument.
pub mod tol {
    /// Largest accepted Hermiticity asymmetry max|A − A†|.
    pub const HERM: f64 = 1e-9;
    /// Most negative accepted eigenvalue for PSD inputs; anything in
    /// [−PSD, 0) is clipped to zero.
    pub const PSD: f64 = 1e-9;
    /// Largest accepted |tr ρ − 1|, and the prior-sum tolerance.
    pub const TRACE: f64 = 1e-9;
    /// Largest accepted completeness deviation max|ΣM_k − I|.
    pub const COMPLETENESS: f64 = 1e-8;
    /// Eigendecomposition reconstruction tolerance.
    pub const EIG: f64 = 1e-10;
    /// Optimality-certificate residual threshold.
    pub const CERT: f64 = 1e-7;
    /// Relative eigenvalue threshold separating support from kernel in
    /// pseudo-inverse powers.
    pub const SUPPORT: f64 = 1e-12;
}

/// Default cap on any matrix dimension produced by tensor powers.
pub const DEFAULT_DIM_CAP: usize = 4096;

/// Version string embedded in machine-readable reports.
pub const TOOLKIT_VERSION: &str = env!("CARGO_PKG_VERSION");
