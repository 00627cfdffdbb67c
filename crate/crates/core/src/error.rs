use thiserror::Error;

/// Errors produced by the bound, genie and sampling routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}`: {reason}")]
    InvalidParameter { name: &'static str, reason: String },

    /// The requested quantity is only defined for the symmetric channel.
    #[error("unsupported configuration: {0}")]
    Unsupported(String),

    #[error("degenerate observation: {0}")]
    DegenerateObservation(String),

    /// A genie that fails the usefulness condition does not certify an upper bound.
    #[error("invalid certificate: {0}")]
    InvalidCertificate(String),

    #[error("precondition violated: {0}")]
    Precondition(String),

    #[error("no useful-region boundary point at theta = {theta}")]
    NoBoundary { theta: f64 },

    #[error("degenerate line: the two points coincide")]
    DegenerateLine,

    #[error("empty batch: sample count must be at least 1")]
    EmptyBatch,

    #[error("degenerate batch: {0}")]
    DegenerateBatch(String),

    #[error("unknown variable `{0}`")]
    UnknownVariable(String),

    #[error("internal consistency: {0}")]
    Internal(String),
}

pub type Result<T> = std::result::Result<T, Error>;
