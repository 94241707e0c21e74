use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("form degree {0} exceeds the supported maximum of 3")]
    DegreeOverflow(usize),

    #[error("operation needs a {expected} structure, got {got}")]
    WrongStructureKind { expected: &'static str, got: String },

    /// The Hessian of the Lagrangian is not invertible.
    #[error("singular Hessian{}", match .time { Some(t) => format!(" at t = {t}"), None => String::new() })]
    SingularHessian { time: Option<f64> },

    #[error("degenerate 2-form: the linear system for the vector field is singular")]
    SingularForm,

    #[error("field `{field}` is singular at the requested point")]
    SingularPoint { field: String },

    #[error("implicit stage did not converge after {iterations} iterations (increment {increment:e})")]
    NonConvergence { iterations: usize, increment: f64 },
}
