use std::fmt;

use thiserror::Error;

/// Position-tagged failure from the textual grammars.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the source where parsing stopped.
    pub offset: usize,
    /// Tokens that would have been accepted at `offset`.
    pub expected: Vec<String>,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} at offset {}", self.message, self.offset)?;
        if !self.expected.is_empty() {
            write!(f, " (expected one of: {})", self.expected.join(", "))?;
        }
        Ok(())
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension error: {0}")]
    Dimension(String),

    #[error("zero polynomial: the Euler operator must be non-trivial")]
    ZeroPolynomial,

    #[error("term {0} carries no delta factor, so it is not supported on a coordinate hyperplane")]
    TermNotHyperplaneSupported(String),

    #[error("unsupported input: {0}")]
    UnsupportedInput(String),

    #[error("log escalation exceeded its bound {bound} ({context})")]
    EscalationExceeded { bound: u32, context: String },

    #[error("recursion trace exceeded its cap of {cap} steps")]
    TraceCapExceeded { cap: usize },

    #[error("quadrature did not converge: error estimate {estimate:e} above tolerance {tol:e}")]
    QuadratureNoConvergence { estimate: f64, tol: f64 },

    #[error("lambda values must be pairwise distinct (duplicate {0})")]
    DuplicateLambda(String),

    #[error("symbol vanishes on the frequency grid (|P| = {modulus:e} at node {node:?})")]
    PoleOnGrid { modulus: f64, node: Vec<f64> },

    #[error("parse error: {0}")]
    Parse(#[from] ParseError),

    #[error("coordinate x{0} appears in more than one factor group of a term")]
    CoordinateConflict(usize),

    #[error("invalid argument: {0}")]
    InvalidArgument(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn dim_mismatch(expected: usize, found: usize) -> Error {
    Error::Dimension(format!("expected dimension {expected}, found {found}"))
}

pub(crate) fn coord_out_of_range(j: usize, dim: usize) -> Error {
    Error::Dimension(format!("coordinate index {j} out of range for dimension {dim}"))
}
