use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("shape error: {0}")]
    Shape(String),

    #[error("non-finite value: {0}")]
    NonFinite(String),

    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("matrix is not Hermitian: max deviation {deviation:e} exceeds {allowed:e}")]
    NotHermitian { deviation: f64, allowed: f64 },

    #[error("operator{} is not positive semidefinite: smallest eigenvalue {min_eigenvalue:e}", .index.map(|i| format!(" {i}")).unwrap_or_default())]
    NotPsd {
        index: Option<usize>,
        min_eigenvalue: f64,
    },

    #[error("element {index} has eigenvalue {max_eigenvalue} above 1")]
    EigenvalueAboveOne { index: usize, max_eigenvalue: f64 },

    #[error("elements do not sum to the identity: max deviation {deviation:e}")]
    Completeness { deviation: f64 },

    #[error(
        "elements {first} and {second} violate P_i P_k = δ_ik P_i: max deviation {deviation:e}"
    )]
    NotOrthogonal {
        first: usize,
        second: usize,
        deviation: f64,
    },

    #[error("measurement has no elements")]
    EmptyMeasurement,

    #[error("expected {expected} labels, got {found}")]
    LabelCount { expected: usize, found: usize },

    #[error("state is not normalized: norm {norm}")]
    NotNormalized { norm: f64 },

    #[error("density matrix trace {trace} differs from 1")]
    Trace { trace: f64 },

    #[error("probability {value:e} at outcome {index} is negative beyond roundoff")]
    NegativeProbability { index: usize, value: f64 },

    #[error("probabilities sum to {sum}, drift beyond 1e-9")]
    ProbabilitySum { sum: f64 },

    #[error("invalid order: {0}")]
    InvalidOrder(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("matrix is not an isometry: ‖W†W − I‖_max = {deviation:e}")]
    NotIsometry { deviation: f64 },

    #[error("unitary completion failed: {0}")]
    Completion(String),

    #[error("singular operator: {0}")]
    Singular(String),

    #[error("transform is not a contraction: operator norm {norm}")]
    NotContraction { norm: f64 },

    #[error("no admissible outcome pair: every candidate has a vanishing root norm")]
    NoAdmissiblePair,

    #[error("expected a projective measurement")]
    NotProjective,

    #[error("scenario error: {0}")]
    Scenario(String),

    #[error("{at}: {source}")]
    At { at: String, source: Box<Error> },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    /// Attaches a location (file field, object name) without losing the
    /// underlying variant.
    pub fn context(self, at: impl std::fmt::Display) -> Error {
        Error::At {
            at: at.to_string(),
            source: Box::new(self),
        }
    }

    /// The innermost error, with all locations stripped.
    pub fn root(&self) -> &Error {
        match self {
            Error::At { source, .. } => source.root(),
            e => e,
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
