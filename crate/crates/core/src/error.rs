use thiserror::Error;

/// Errors raised by the analytic engine, the model builders and the Fock oracle.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    /// An input lies outside its physical domain.
    #[error("{name} {message}")]
    Parameter { name: &'static str, message: String },

    /// Inconsistent dimensions while constructing an exponent, series or derivative spec.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// A physically real quantity came out with a non-negligible imaginary part,
    /// or a probability fell outside [0, 1].
    #[error("numerical consistency check failed for {quantity}: {detail}")]
    NumericalConsistency {
        quantity: &'static str,
        detail: String,
    },

    /// The heralding probability or the Fisher information vanishes, so the
    /// requested quantity is undefined.
    #[error("degenerate {quantity}: {value:e}")]
    Degenerate { quantity: &'static str, value: f64 },

    /// The parity signal is stationary at the operating point; error propagation is undefined.
    #[error("parity signal is stationary at phi = {phi} (|df/dphi| = {derivative:e})")]
    Stationary { phi: f64, derivative: f64 },

    /// The truncated Fock basis cannot represent the state.
    #[error("Fock truncation: {0}")]
    Truncation(String),

    /// A state that must be normalized is not.
    #[error("state is not normalized (norm^2 = {norm_sqr})")]
    Normalization { norm_sqr: f64 },

    /// A sweep request or configuration file is malformed.
    #[error("{0}")]
    Usage(String),

    /// Writing an output table failed.
    #[error("cannot write {path}: {message}")]
    Io { path: String, message: String },

    /// Internal invariant violated; indicates a bug rather than bad input.
    #[error("invariant violated: {0}")]
    Invariant(String),
}

impl Error {
    pub(crate) fn parameter(name: &'static str, message: impl Into<String>) -> Self {
        Error::Parameter {
            name,
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
