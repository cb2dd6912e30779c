use thiserror::Error;

/// Errors raised by the geometry, bound and construction routines.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("degenerate triple: a ray endpoint coincides with its apex")]
    DegenerateTriple,

    #[error("invalid point set: {0}")]
    InvalidPointSet(String),

    #[error("not a unit vector (norm {0})")]
    NotUnit(f64),

    #[error("value out of range: {0}")]
    OutOfRange(String),

    #[error("floating-point overflow: {0}")]
    Overflow(String),

    #[error("degenerate simplex: vertices are affinely dependent")]
    DegenerateSimplex,

    #[error("point is not inside the simplex")]
    NotInterior,

    #[error("point is not in the convex hull")]
    NotInHull,

    #[error("point set is not in convex position (point {0} lies in the hull of the others)")]
    NotConvexPosition(usize),

    #[error("hull is not full-dimensional (affine rank {rank} < {dim})")]
    DegenerateHull { rank: usize, dim: usize },

    #[error("points do not lie in an open hemisphere")]
    NotHemispherical,

    #[error("rays at vertex {vertex} need a cap of radius {required} > {eta}")]
    CapTooSmall {
        vertex: usize,
        required: f64,
        eta: f64,
    },

    #[error("covering failed: {uncovered} probes still uncovered after {rounds} rounds")]
    CoverageFailed { uncovered: usize, rounds: usize },

    #[error("scale exhausted at step {step}: max angle {max_angle} > {target}")]
    ScaleExhausted {
        step: usize,
        max_angle: f64,
        target: f64,
    },

    #[error("hypothesis violated: {0}")]
    HypothesisViolated(String),

    #[error("segment {0}-{1} is not within rho/2 of any line")]
    ColoringFailed(usize, usize),
}

impl Error {
    /// `true` when the error reports bad caller input rather than a failed
    /// numerical procedure.
    pub fn is_precondition(&self) -> bool {
        !matches!(
            self,
            Error::CoverageFailed { .. } | Error::ScaleExhausted { .. } | Error::Overflow(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
