use thiserror::Error;

pub type Result<T> = std::result::Result<T, FadeError>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum FadeError {
    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("trigonometric knot values are singular for spacing h = {h}")]
    SingularSpacing { h: f64 },

    #[error("parameter `{name}` = {value} is outside its domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("length mismatch: expected {expected}, got {got}")]
    LengthMismatch { expected: usize, got: usize },

    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),

    #[error("zero pivot at row {index} during tridiagonal elimination")]
    ZeroPivot { index: usize },

    #[error("singular linear system: {0}")]
    SingularSystem(String),

    #[error("expression is singular at x = {x}: {what}")]
    Singularity { x: f64, what: &'static str },

    #[error("{0} did not converge")]
    NonConvergence(String),

    #[error("Newton iteration stopped after {iterations} iterations with residual {residual:e}")]
    MaxIterations { iterations: usize, residual: f64 },

    #[error("iteration diverged: {0}")]
    Divergence(String),

    #[error("unknown problem id `{0}`")]
    UnknownProblem(String),

    #[error("incompatible scheme: {0}")]
    IncompatibleScheme(String),

    #[error("{0}")]
    Undefined(String),
}
