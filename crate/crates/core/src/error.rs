use num_complex::Complex64;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum RifError {
    #[error("polynomial is identically zero")]
    DegenerateInput,

    #[error("reflection matches a non-unimodular multiple (ratio modulus {modulus:.6}); check the declared bidegree")]
    AmbiguousSymmetry { modulus: f64 },

    #[error("root tracking is ambiguous near theta = {theta:.9} (cost ratio {ratio:.3})")]
    TrackingAmbiguity { theta: f64, ratio: f64 },

    #[error("denominator vanishes inside the bidisk near ({:.6}{:+.6}i, {:.6}{:+.6}i)", .witness.0.re, .witness.0.im, .witness.1.re, .witness.1.im)]
    NotSemiStable { witness: (Complex64, Complex64) },

    #[error("p and its reflection share a nontrivial factor")]
    CommonFactor,

    #[error("resultant of p and its reflection vanishes identically")]
    ResultantDegenerate,

    #[error("radial limit did not settle (last extrapolants differ by {spread:.3e})")]
    NoLimit { spread: f64 },

    #[error("level polynomial is identically zero")]
    DegenerateLevel,

    #[error("only {found} samples in the fitting window, need {needed}")]
    InsufficientSamples { found: usize, needed: usize },

    #[error("no window of the log-log data fits an integer order ({detail})")]
    NoisyData { detail: String },

    #[error("contact orders disagree between charts at tau: K1 = {k1}, K2 = {k2}")]
    EcoViolation { k1: u32, k2: u32 },

    #[error("orders of contact over probe pairs have no majority")]
    CrossCheckFailure,

    #[error("resultant is identically zero")]
    IdenticallyZero,

    #[error("multiplicity count unstable after {attempts} shears")]
    ShearFailure { attempts: usize },

    #[error("Bezout audit mismatch: counted {total}, expected {expected}")]
    AuditMismatch { total: usize, expected: usize },

    #[error("level set has a line component at the singularity")]
    VerticalComponent,

    #[error("polynomial is not essentially symmetric")]
    NotSymmetric,

    #[error("R and Q share a root")]
    CommonRoot,

    #[error("matrix is not self-adjoint")]
    NotSelfAdjoint,

    #[error("(0,0) cofactor of the resolvent vanishes identically")]
    DegenerateResolvent,

    #[error("construction identity failed: {0}")]
    IdentityViolation(String),

    #[error("unknown fixture {0:?}")]
    UnknownFixture(String),

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl RifError {
    /// Whether the error stems from malformed or unsupported input rather
    /// than a numerical breakdown.
    pub fn is_input_error(&self) -> bool {
        matches!(
            self,
            RifError::DegenerateInput
                | RifError::AmbiguousSymmetry { .. }
                | RifError::NotSemiStable { .. }
                | RifError::CommonFactor
                | RifError::NotSymmetric
                | RifError::NotSelfAdjoint
                | RifError::DegenerateResolvent
                | RifError::UnknownFixture(_)
                | RifError::InvalidInput(_)
                | RifError::Io(_)
                | RifError::Json(_)
        )
    }
}

pub type Result<T> = std::result::Result<T, RifError>;
