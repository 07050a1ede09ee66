use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected} grid points, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("unsupported Sobolev exponent {0} (supported: 0, 1/2)")]
    UnsupportedExponent(f64),

    #[error("non-finite sample at x = {x}")]
    NonFiniteSample { x: f64 },

    #[error("invalid group element: {0}")]
    InvalidGroupElement(String),

    #[error("invalid potential: {0}")]
    InvalidPotential(String),

    #[error("requested {requested} modes but the grid only carries {available}")]
    TooManyModes { requested: usize, available: usize },

    #[error("integration diverged at step {step} (t = {t})")]
    Divergence { step: usize, t: f64 },

    #[error("step size underflow at t = {t} (h = {h:e})")]
    StepSizeUnderflow { t: f64, h: f64 },

    #[error("invalid time stepping: {0}")]
    InvalidStepping(String),

    #[error(
        "tubular neighborhood exceeded: residual {residual:e} after {iterations} Newton iterations, \
         |w|_H1/2 = {w_norm:e}"
    )]
    TubularNeighborhoodExceeded { iterations: usize, residual: f64, w_norm: f64 },

    #[error("degenerate parametrization: Jacobian condition number {0:e}")]
    DegenerateParametrization(f64),

    #[error("at t = {t}: {source}")]
    AtTime { t: f64, source: Box<Error> },

    #[error("config error at {path}: {message}")]
    Config { path: String, message: String },

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub(crate) fn config(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Config { path: path.into(), message: message.into() }
    }

    pub(crate) fn at_time(self, t: f64) -> Self {
        Error::AtTime { t, source: Box::new(self) }
    }
}
