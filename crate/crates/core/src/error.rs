use thiserror::Error;

use crate::radial::QuantumNumbers;

/// Errors raised by the solver and the algebra checks.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid quantum numbers n={n}, l={l}: {reason}")]
    InvalidQuantumNumbers { n: u32, l: u32, reason: &'static str },

    #[error("domain error: {0}")]
    Domain(String),

    /// The fixed-point equation has no root on (0, 1]: the coupling lies
    /// beyond the level's critical value.
    #[error("no bound state for {qn}: g = {g:.6e} exceeds the critical coupling (max of RHS - eta = {h_max:.3e})")]
    NoSolution { qn: QuantumNumbers, g: f64, h_max: f64 },

    #[error("no convergence: {0}")]
    NonConvergence(String),

    #[error("dimension mismatch: expected {expected}, got {actual}")]
    DimensionMismatch { expected: usize, actual: usize },

    /// A commutator evaluated on the polynomial test space is not a scalar
    /// multiple of the identity. Indicates a broken operator representation.
    #[error("representation mismatch: {0}")]
    RepresentationMismatch(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;

pub(crate) fn domain(msg: impl Into<String>) -> Error {
    Error::Domain(msg.into())
}
