//! Simulation library for airborne phased-MIMO radar clutter under FDA
//! scattered-wave jamming: scene geometry, array manifolds, the jammer
//! modulation model, covariance assembly and STAP performance metrics.
//!
//! The canonical entry point is [`Scenario`], which bundles the reference
//! X-band side-looking configuration; the individual modules expose every
//! building block for custom experiments.

pub mod arrays;
pub mod covariance;
pub mod error;
pub mod geometry;
pub mod jammer;
pub mod quad;
pub mod scenario;
pub mod stap;

pub use arrays::{dirichlet_kernel, ArrayConfig};
pub use covariance::{
    clutter_covariance, clutter_rank, clutter_snapshots, covariance_from_snapshots,
    eigen_spectrum, eigen_spectrum_db, hermitian_asymmetry, jamming_covariance,
    jamming_snapshots, total_covariance, ScatterPowers,
};
pub use error::{Error, Result};
pub use geometry::{
    focal_distance, jammer_angles, jamming_trajectory, sample_rings, EllipseTrajectory,
    Position3D, RingKind, RingPoint, SceneGeometry, ScattererRing, SPEED_OF_LIGHT,
};
pub use jammer::{JammerKind, JammerModel, JammingPurpose, ModulationMatrix, ModulationMode};
pub use scenario::Scenario;
pub use stap::{
    if_curve, improvement_factor, monte_carlo_if, mvdr_spectrum, optimal_weights,
    secondary_notch, IfCurve, TargetModel,
};
