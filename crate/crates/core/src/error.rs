use thiserror::Error;

/// Errors raised by the placement and permutation operations.
///
/// Indices reported here are 1-based, matching the JSON formats.
#[derive(Debug, Error)]
pub enum Error {
    #[error("size mismatch: expected {expected}, got {found}")]
    SizeMismatch { expected: usize, found: usize },

    #[error("index {index} out of range for size {n}")]
    IndexOutOfRange { index: usize, n: usize },

    #[error("pair ({0}, {0}) is on the diagonal")]
    DiagonalPair(usize),

    #[error("rectangle {0} is degenerate (min must be strictly below max on both axes)")]
    DegenerateRect(usize),

    #[error("placement is infeasible: rectangles {0} and {1} overlap")]
    Infeasible(usize, usize),

    #[error("placement is not forcing: pair ({0}, {1}) has no forced relation")]
    NotForcing(usize, usize),

    #[error("permutation is not biplane")]
    NotBiplane,

    #[error("not a permutation: {0}")]
    NotABijection(String),

    #[error("({a}, {b}, {c}, {d}) is not a bad quartet")]
    NotBadQuartet { a: usize, b: usize, c: usize, d: usize },

    #[error("invalid dimensions: {0}")]
    InvalidDimensions(String),

    #[error("invalid netlist: {0}")]
    InvalidNetlist(String),

    #[error("size {n} exceeds the exhaustive search limit {limit}")]
    LimitExceeded { n: usize, limit: usize },

    #[error("malformed input: {0}")]
    Format(String),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for errors caused by unparsable input rather than by its meaning.
    pub fn is_format(&self) -> bool {
        matches!(self, Error::Format(_) | Error::Json(_))
    }
}

pub type Result<T> = std::result::Result<T, Error>;
