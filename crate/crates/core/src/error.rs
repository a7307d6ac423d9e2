use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape mismatch: {0}")]
    ShapeMismatch(String),

    #[error("element is not a unit (constant term vanishes)")]
    NotAUnit,

    #[error("operation requires an exact scalar field")]
    UnsupportedScalar,

    #[error("ideal is not zero-dimensional")]
    NotZeroDimensional,

    #[error("origin is not a zero of generator {index}")]
    OriginNotAZero { index: usize },

    #[error("origin is not an isolated zero (no stabilization up to N = {nmax})")]
    NotIsolated { nmax: u32 },

    #[error("normal form requires a certified border basis")]
    RequiresCertifiedBasis,

    #[error("eigenvalue clusters closer than the configured gap after {attempts} attempts (closest distance {distance:e}, gap {gap:e})")]
    AmbiguousClusters { attempts: usize, distance: f64, gap: f64 },

    #[error("residual rule for border monomial {monomial} is not in the residual ideal")]
    ResidualMismatch { monomial: String },

    #[error("residual Jacobian is singular (rank {rank} of {size})")]
    NotSimpleZero { rank: usize, size: usize },

    #[error("internal invariant violated: {0}")]
    InternalInvariant(String),

    #[error("root discs of radius {eps} overlap (centers {first} and {second})")]
    DiscsOverlap { eps: f64, first: String, second: String },

    #[error("perturbed systems degenerate: {failures} failures exceed the resample budget {budget}")]
    DegenerateSystem { failures: usize, budget: usize },

    #[error("eigenvalue computation did not converge")]
    EigenFailure,

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("{line}:{column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
}

impl Error {
    /// Variant name, stable across releases.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::ShapeMismatch(_) => "ShapeMismatch",
            Error::NotAUnit => "NotAUnit",
            Error::UnsupportedScalar => "UnsupportedScalar",
            Error::NotZeroDimensional => "NotZeroDimensional",
            Error::OriginNotAZero { .. } => "OriginNotAZero",
            Error::NotIsolated { .. } => "NotIsolated",
            Error::RequiresCertifiedBasis => "RequiresCertifiedBasis",
            Error::AmbiguousClusters { .. } => "AmbiguousClusters",
            Error::ResidualMismatch { .. } => "ResidualMismatch",
            Error::NotSimpleZero { .. } => "NotSimpleZero",
            Error::InternalInvariant(_) => "InternalInvariant",
            Error::DiscsOverlap { .. } => "DiscsOverlap",
            Error::DegenerateSystem { .. } => "DegenerateSystem",
            Error::EigenFailure => "EigenFailure",
            Error::InvalidInput(_) => "InvalidInput",
            Error::Parse { .. } => "Parse",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
