use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// Errors raised across the crate. Numbers are carried as decimal strings so
/// the error type does not depend on the scalar type.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("{value} is not invertible modulo {modulus}")]
    NotInvertible { value: String, modulus: String },

    /// Congruences `first` and `second` (positions in the input) have no common solution.
    #[error("congruences {first} and {second} are incompatible")]
    Incompatible { first: usize, second: usize },

    #[error("parse error at {path}: {message}")]
    Parse { path: String, message: String },

    #[error("invalid graph: {0}")]
    Validation(String),

    #[error("vertex {vertex} out of range for a graph with {n} vertices")]
    VertexOutOfRange { vertex: usize, n: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("{what} exceeds the limit of {limit}")]
    SizeExceeded { what: String, limit: u128 },

    #[error("expected a vector of length {expected}, found {found}")]
    LengthMismatch { expected: usize, found: usize },

    /// An equality edge (`r = 0`) joins a vertex below the cut to one at or
    /// above it, so no constant flow-up class starts at `index`.
    #[error("an equality edge crosses the cut at vertex {index}; no constant flow-up class exists")]
    ZeroModulusCut { index: usize },

    /// A construction that theory guarantees to succeed did not.
    #[error("internal contradiction: {0}")]
    InternalContradiction(String),

    #[error("vector is not in the span of the basis (inexact division at vertex {index})")]
    NotInSpan { index: usize },

    #[error("dimension mismatch: {left} vs {right}")]
    DimensionMismatch { left: usize, right: usize },

    #[error("no flow-up class with leading vertex {index} exists")]
    NoFlowUp { index: usize },

    #[error("no flow-up class with leading vertex {index} found inside the enumeration window")]
    NoFlowUpFound { index: usize },
}
