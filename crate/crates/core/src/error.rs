use thiserror::Error;

/// Errors surfaced by geometry, jammer and covariance computations.
#[derive(Debug, Error)]
pub enum Error {
    /// Jammer sits on the radar's vertical axis; its azimuth is undefined.
    #[error("degenerate jammer position: x and y are both zero, azimuth undefined")]
    DegeneratePosition,

    /// The iso-range ellipsoid never reaches the ground plane.
    #[error("the iso-range ellipsoid does not intersect the ground plane (z = 0)")]
    NoGroundIntersection,

    /// The ground-trace conic is not a genuine ellipse (4*Q1*Q3 - Q2^2 <= 0).
    #[error("degenerate conic: quadratic part is not positive definite")]
    DegenerateConic,

    /// No azimuth ray from the origin meets the scatterer trajectory.
    #[error("empty scatterer ring: no azimuth admits a trajectory point")]
    EmptyRing,

    /// Adaptive quadrature failed to reach the requested tolerance.
    #[error("quadrature did not converge: estimated relative error {achieved:.3e} > {requested:.3e}")]
    QuadratureNonConvergence { requested: f64, achieved: f64 },

    /// Closed-form and quadrature evaluations of an Omega integral disagree.
    #[error("omega cross-check failed: closed form and quadrature differ by {rel_err:.3e} (limit {limit:.1e})")]
    OmegaCrossCheck { rel_err: f64, limit: f64 },

    /// Matrix dimensions do not match between operands.
    #[error("dimension mismatch: {context}")]
    DimensionMismatch { context: String },

    /// Covariance solve failed (matrix not positive definite).
    #[error("covariance is not positive definite; cannot solve")]
    NotPositiveDefinite,

    /// Hermitian eigendecomposition failed to converge.
    #[error("eigendecomposition failed")]
    EigenFailure,

    /// Scenario configuration rejected during validation.
    #[error("invalid configuration: {key}: {reason}")]
    InvalidConfig { key: String, reason: String },
}

pub type Result<T> = std::result::Result<T, Error>;
