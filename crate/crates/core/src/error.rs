use thiserror::Error;

/// Errors raised by the geometric, algebraic and groupoid layers.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("point {point:?} lies on (or within 1e-9 of) a removed point")]
    RemovedPoint { point: Vec<f64> },

    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid point: {0}")]
    InvalidPoint(String),

    #[error("path is not closed (endpoint gap {gap:.3e})")]
    NotClosed { gap: f64 },

    #[error("endpoint mismatch (gap {gap:.3e})")]
    EndpointMismatch { gap: f64 },

    #[error("quadrature did not converge: error estimate {estimate:.3e} above tolerance {tolerance:.3e}")]
    QuadratureNotConverged { estimate: f64, tolerance: f64 },

    #[error("paths are not homotopic: {0}")]
    NotHomotopic(String),

    #[error("antipodal points cannot be joined by chordal interpolation")]
    AntipodalDegeneracy,

    #[error("operation not supported by this model: {0}")]
    UnsupportedModel(String),

    #[error("no declared cocycle value for pair ({i}, {j})")]
    MissingDeclaredValue { i: String, j: String },

    #[error("word {0} is not a relation")]
    NotARelation(String),

    #[error("values are expressed over different basis constants")]
    BasisMismatch,

    #[error("endpoint {0:?} is not a marked point")]
    UnmarkedEndpoint(Vec<f64>),

    #[error("phase cannot be realized: {0}")]
    UnreachablePhase(String),

    #[error("flat twist requires the zero form")]
    NotFlat,

    #[error("unsupported symmetry for this model: {0}")]
    UnsupportedSymmetry(String),

    #[error("character incompatible with the period group: {0}")]
    IncompatibleCharacter(String),

    #[error("invalid word: {0}")]
    InvalidWord(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error("invalid input: {0}")]
    Invalid(String),
}

pub type Result<T> = std::result::Result<T, Error>;
