use thiserror::Error;

/// Errors raised by the library. Every variant is a domain error with a
/// stable machine-readable code (see [`Error::code`]).
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("matrix is not square ({rows}x{cols})")]
    NotSquare { rows: usize, cols: usize },
    #[error("matrix is not unimodular")]
    NotUnimodular,
    #[error("unsupported root system family {0}")]
    UnsupportedFamily(String),
    #[error("invalid root system: {0}")]
    InvalidSpec(String),
    #[error("root is not in the span of the simple roots (or has mixed signs)")]
    NotInSpan,
    #[error("subspace is not spanned by the roots it contains")]
    NotRootSpan,
    #[error("lattice map is not surjective onto the root lattice")]
    NotSurjective,
    #[error("lattice map does not send roots to multiples of roots: {0}")]
    NotRootCompatible(String),
    #[error("R-data has no entry for the pair of root {0}")]
    MissingPair(String),
    #[error("no admissible chart found for the given R-data")]
    NoChartFound,
    #[error("A_n-data does not induce a total preorder: {0}")]
    NotPreorder(String),
    #[error("contraction needs a nonempty set of kept points")]
    EmptyKeep,
    #[error("ray values do not determine a linear function on cone {0}")]
    InconsistentPL(usize),
    #[error("cone {0} is not simplicial")]
    NotSimplicial(usize),
    #[error("projective ratio (0:0)")]
    ZeroRatio,
    #[error("invalid subset: {0}")]
    InvalidSubset(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Stable identifier used in the CLI's error object.
    pub fn code(&self) -> &'static str {
        match self {
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotSquare { .. } => "NotSquare",
            Error::NotUnimodular => "NotUnimodular",
            Error::UnsupportedFamily(_) => "UnsupportedFamily",
            Error::InvalidSpec(_) => "InvalidSpec",
            Error::NotInSpan => "NotInSpan",
            Error::NotRootSpan => "NotRootSpan",
            Error::NotSurjective => "NotSurjective",
            Error::NotRootCompatible(_) => "NotRootCompatible",
            Error::MissingPair(_) => "MissingPair",
            Error::NoChartFound => "NoChartFound",
            Error::NotPreorder(_) => "NotPreorder",
            Error::EmptyKeep => "EmptyKeep",
            Error::InconsistentPL(_) => "InconsistentPL",
            Error::NotSimplicial(_) => "NotSimplicial",
            Error::ZeroRatio => "ZeroRatio",
            Error::InvalidSubset(_) => "InvalidSubset",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
