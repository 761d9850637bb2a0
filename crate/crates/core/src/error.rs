use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("edge weight must be positive, got {0}")]
    NonPositiveWeight(f64),

    #[error("a graph needs at least two vertices, found {0}")]
    TooFewVertices(usize),

    #[error("vertex index {0} is out of range")]
    UnknownVertex(usize),

    #[error("unknown vertex label `{0}`")]
    UnknownLabel(String),

    #[error("graph is disconnected")]
    Disconnected,

    #[error("t = {t} is not below the convergence limit {limit}")]
    Divergent { t: f64, limit: f64 },

    #[error("matrix is ill-conditioned (condition estimate {0:e})")]
    IllConditioned(f64),

    #[error("matrix is singular")]
    Singular,

    #[error("matrix is not symmetric")]
    NotSymmetric,

    #[error("power iteration did not converge within {0} iterations")]
    NoConvergence(usize),

    #[error("Perron residual {0:e} exceeds tolerance")]
    NotPerronRoot(f64),

    #[error("proximity matrix has a nonpositive entry at ({0}, {1})")]
    NonPositiveProximity(usize, usize),

    #[error("balance degree {m} is below the maximum weighted degree {required}")]
    BalanceTooSmall { m: f64, required: f64 },

    #[error("walk enumeration exceeded the cap of {0} walks")]
    EnumerationBlowup(usize),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// True for failures caused by the input graph or parameters rather than
    /// by the numerics.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            Error::Parse { .. }
                | Error::NonPositiveWeight(_)
                | Error::TooFewVertices(_)
                | Error::UnknownVertex(_)
                | Error::UnknownLabel(_)
                | Error::Disconnected
                | Error::InvalidParameter(_)
                | Error::BalanceTooSmall { .. }
                | Error::Io(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, Error>;
