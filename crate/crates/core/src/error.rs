use thiserror::Error;

/// Errors produced by the geometry kernels, the curve ODE engine and the
/// pair factory.
#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("dimension mismatch: expected {expected}, found {found}")]
    DimensionMismatch { expected: usize, found: usize },

    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("radius must be positive, got {0}")]
    NonPositiveRadius(f64),

    /// A unit spacelike vector orthogonal to `w` describes a hyperplane, not a sphere.
    #[error("Lorentz vector represents a hyperplane (<v,w> = {0:e})")]
    HyperplaneElement(f64),

    #[error("parameter {0:?} lies outside the domain (or within the finite-difference margin)")]
    OutsideDomain(Vec<f64>),

    #[error("first derivative has rank < n: not an immersion")]
    RankDeficient,

    #[error("point coincides with the inversion center")]
    AtInversionCenter,

    #[error("degenerate metric: {0}")]
    DegenerateMetric(String),

    #[error("infeasible: {0}")]
    Infeasible(String),

    #[error("first-integral drift {drift:e} exceeds {tolerance:e} after step refinement")]
    DriftUnrecoverable { drift: f64, tolerance: f64 },

    #[error("singular transform at s = {s}: |h3| = {h3:e} below threshold")]
    SingularTransform { s: f64, h3: f64 },

    #[error("curvature vanishes at s = {0}")]
    VanishingCurvature(f64),

    #[error("degenerate configuration: {0}")]
    Degenerate(String),

    #[error("eigenvalues of the recovered Codazzi tensor do not form two clusters: {0}")]
    NotTwoClusters(String),

    #[error("malformed pair file: {0}")]
    MalformedPairFile(String),

    #[error("verification failed: {0}")]
    VerificationFailed(String),
}

pub type Result<T> = std::result::Result<T, Error>;

pub(crate) fn check_dim(expected: usize, found: usize) -> Result<()> {
    if expected == found {
        Ok(())
    } else {
        Err(Error::DimensionMismatch { expected, found })
    }
}
