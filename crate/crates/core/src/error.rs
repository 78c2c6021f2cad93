//! Error types shared across the library.

pub type Result<T> = std::result::Result<T, Error>;

/// Failure modes of the simulation pipeline.
#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    /// A scalar argument lies outside its physical domain.
    #[error("domain error: {0}")]
    Domain(String),

    /// Inputs have inconsistent shapes or violate a structural contract.
    #[error("structural error: {0}")]
    Structural(String),

    /// The eigensolver did not converge within the sweep cap.
    #[error("eigensolver did not converge after {sweeps} sweeps")]
    NoConvergence { sweeps: usize },

    /// The quadratic form has a non-positive eigenvalue; the oscillator
    /// network is unstable and has no real mode frequency there.
    #[error("unstable quadratic form: eigenvalue {value:e} at mode {mode}")]
    Instability { mode: usize, value: f64 },

    /// A pair coupling has the wrong sign or a vanishing magnitude, so no
    /// positive evolution time can realize the target phase.
    #[error("link {link} cannot be scheduled: {reason}")]
    Unschedulable { link: usize, reason: String },

    /// Least-squares fit on degenerate data.
    #[error("fit error: {0}")]
    Fit(String),

    /// Configuration file could not be read, parsed, or validated.
    #[error("config error: {0}")]
    Config(String),
}
