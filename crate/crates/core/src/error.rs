use thiserror::Error;

/// Error type shared by all modules of this crate.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// Input outside the mathematical domain of an operation.
    #[error("domain error: {0}")]
    Domain(String),

    /// A configured enumeration or resource limit was exceeded.
    #[error("resource limit exceeded: {0}")]
    Resource(String),

    /// The operation's hypotheses do not hold for this input; callers
    /// should report the cell as not applicable rather than failing.
    #[error("not applicable: {0}")]
    NotApplicable(String),
}

pub type Result<T> = std::result::Result<T, Error>;
