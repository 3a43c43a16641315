use thiserror::Error;

/// Errors raised while building circuits, simulating states, or planning searches.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    /// A value does not fit the register or state it was meant for.
    #[error("value out of range: {0}")]
    Range(String),
    /// An argument violates an operation's precondition.
    #[error("invalid argument: {0}")]
    Argument(String),
    /// A gate or circuit is malformed for the qubits it touches.
    #[error("circuit error: {0}")]
    Circuit(String),
    /// Register lookup or placement failed.
    #[error("layout error: {0}")]
    Layout(String),
    /// Iteration planning is impossible, e.g. nothing is marked.
    #[error("planning error: {0}")]
    Planning(String),
}

pub type Result<T> = std::result::Result<T, Error>;
