use thiserror::Error;

use crate::canonical::WalkClass;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum WalkError {
    #[error("vector pair is not orthonormal ({which}): deviation {deviation:e}")]
    NonOrthonormal { which: &'static str, deviation: f64 },

    #[error("phase constraint a - b = c - d + pi violated by {residual:e}")]
    PhaseConstraintViolation { residual: f64 },

    #[error("radial parameter r = {0} outside [0, 1]")]
    RadiusOutOfRange(f64),

    #[error("non-finite value in {0}")]
    NonFinite(&'static str),

    #[error("window half-width {got} too small (need at least {min})")]
    WindowTooSmall { got: usize, min: usize },

    #[error("walk is not in class {expected}")]
    NotInClass { expected: WalkClass },

    #[error("internal inconsistency: {0}")]
    InternalInconsistency(String),

    #[error("gauge verification failed: deviation {deviation:e} exceeds {tolerance:e}")]
    VerificationFailed { deviation: f64, tolerance: f64 },

    #[error("state is not a unit vector (norm^2 = {norm_sq})")]
    NotUnitState { norm_sq: f64 },

    #[error("canonical forms are of different classes ({0} vs {1})")]
    ClassMismatch(WalkClass, WalkClass),

    #[error("canonical forms cover different windows")]
    WindowMismatch,

    #[error("degenerate radial parameter (r in {{0, 1}}); use the gauge-search oracle")]
    DegenerateParameters,

    #[error("witness does not satisfy its operator identity (deviation {deviation:e})")]
    InvalidWitness { deviation: f64 },

    #[error("amplitude leaked to boundary site {site}")]
    Leakage { site: i64 },

    #[error("gauge transform does not cover site {0}")]
    GaugeOutOfRange(i64),
}

pub type Result<T> = std::result::Result<T, WalkError>;
