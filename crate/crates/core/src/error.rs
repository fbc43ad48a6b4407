use thiserror::Error;

/// Errors raised by the toolkit.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("structure constants are not antisymmetric (max defect {defect:e})")]
    NotAntisymmetric { defect: f64 },

    #[error("Jacobi identity violated (max residual {residual:e})")]
    JacobiViolated { residual: f64 },

    #[error("contact plane vectors are linearly dependent")]
    DegeneratePlane,

    #[error("contact form does not annihilate the plane (defect {defect:e})")]
    FormNotAnnihilating { defect: f64 },

    #[error("contact condition violated: alpha([u1, u2]) = {scalar:e}")]
    NotContact { scalar: f64 },

    #[error("singular matrix (|det| = {det:e})")]
    Singular { det: f64 },

    #[error("inconsistent contact data: {0}")]
    Inconsistent(String),

    #[error("not a contact Lie algebra datum: constraint residual {residual:e}")]
    ConstraintViolated { residual: f64 },

    #[error("algebra is not sl(2): {0}")]
    NotSl2(String),

    #[error("unsupported case: {0}")]
    Unsupported(String),

    #[error("invalid chart: {0}")]
    InvalidChart(String),

    #[error("angle lift failed: step could not be resolved near z = {z} after {depth} refinements")]
    StepResolution { z: f64, depth: u32 },

    #[error("path step {index} too large ({size:e}); refine the path")]
    PathStep { index: usize, size: f64 },

    #[error("step {dt:e} exceeds the allowed maximum {max:e}")]
    StepSize { dt: f64, max: f64 },

    #[error("malformed matrix: {0}")]
    MalformedMatrix(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("unknown preset `{0}`")]
    UnknownPreset(String),

    #[error("json: {0}")]
    Json(String),
}

pub type Result<T> = std::result::Result<T, Error>;

impl From<serde_json::Error> for Error {
    fn from(e: serde_json::Error) -> Self {
        Error::Json(e.to_string())
    }
}
