use thiserror::Error;

/// Errors raised by the simulator and the distributed protocol.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A qubit count or dimension fell outside the supported range.
    #[error("size error: {0}")]
    Size(String),
    /// An argument was outside the domain of the operation.
    #[error("domain error: {0}")]
    Domain(String),
    /// An experiment configuration violated one of its invariants.
    #[error("{0}")]
    Config(String),
    /// A protocol step was invoked out of order.
    #[error("protocol error: {0}")]
    Protocol(String),
    /// Aggregation was asked to combine incompatible inputs.
    #[error("usage error: {0}")]
    Usage(String),
    /// An internal invariant was broken. Indicates a bug.
    #[error("internal invariant violated: {0}")]
    Invariant(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
