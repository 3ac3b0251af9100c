use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("no (nu1, nu2) satisfies the bound for (p_min, p_max) = ({p_min}, {p_max})")]
    InfeasibleBound { p_min: f64, p_max: f64 },

    #[error("expected count {expected:.3e} exceeds the impulse budget {limit:.0e}")]
    TooManyImpulses { expected: f64, limit: f64 },

    #[error("operator {0} has no closed-form Green's function; use the spectral path")]
    UnsupportedClosedForm(String),

    #[error("operator {0} is not supported: {1}")]
    UnsupportedOperator(String, String),

    #[error("test function support spans {samples} samples, at least {required} required")]
    GridTooCoarse { samples: usize, required: usize },

    #[error("margin {declared} below the {required} required by {operator}")]
    MarginTooSmall {
        operator: String,
        declared: f64,
        required: f64,
    },

    #[error("no exact reference generator for operator {0}")]
    UnsupportedReference(String),

    #[error("grid mismatch: {0}")]
    GridMismatch(String),

    #[error("every rung of the ladder is within 3 standard errors of the analytic value")]
    NoiseFloor,

    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    #[error("io error: {0}")]
    Io(String),
}

impl Error {
    pub(crate) fn param(msg: impl Into<String>) -> Self {
        Error::InvalidParameter(msg.into())
    }

    pub(crate) fn parse(line: usize, msg: impl Into<String>) -> Self {
        Error::Parse {
            line,
            message: msg.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
