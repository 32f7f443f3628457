//! Crate-wide error type. Every fallible operation returns [`Result`];
//! panics are reserved for violated internal invariants.

/// Errors surfaced by exact arithmetic, geometry, and parsing.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    /// Division by the zero polynomial or zero rational function.
    #[error("division by zero")]
    DivisionByZero,

    /// Residue of an element with negative valuation at infinity.
    #[error("not integral at infinity")]
    NotIntegral,

    /// Specialization of t at a point where a denominator vanishes.
    #[error("pole at evaluation point")]
    Pole,

    /// Reduction mod p hit a denominator divisible by p.
    #[error("modular reduction failed: {0}")]
    Modular(String),

    /// A matrix that must be invertible is singular.
    #[error("singular matrix")]
    Singular,

    /// Incompatible or unsupported dimensions.
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    /// Diagonal translation with repeated valuations; the sector-face
    /// construction needs pairwise-distinct diagonal valuations.
    #[error("non-generic translation")]
    NonGeneric,

    /// Family parameters at which the construction degenerates.
    #[error("degenerate parameters: {0}")]
    Degenerate(String),

    /// Text input rejected by the matrix/function parser.
    #[error("{msg} at line {line}, column {col}")]
    Parse {
        line: usize,
        col: usize,
        msg: String,
    },

    /// Structurally invalid input (bad word syntax, empty grid, ...).
    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
