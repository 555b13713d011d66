//! Gromov–Hausdorff type distances between finite metric spaces and finite
//! dynamical systems, and a shadowing-based conjugacy construction.

pub mod dynamics;
pub mod gh;
pub mod metric;
pub mod pointed;
mod search;
pub mod stability;
pub mod systems;

pub use dynamics::{
    c0_distance, gh0_distance, is_local_conjugacy, pgh0_distance, pgh0_pair_bound,
    pointed_property_checks, restricted_c0_distance, ConjugacyCheck, DynError, Pgh0Result,
    PropertyParams, PropertyReport, SelfMapSystem,
};
pub use gh::{
    covering_radius, distortion, distortion_on, eps_inverse, gh_exact, gh_hat_exact, gh_sandwich,
    gh_upper, is_gha, ApproxCertificate, ApproxKind, GhError, GhHatSolution, GhSolution, MapTable,
    PointedApproxParams, SandwichReport, Witness, DEFAULT_MAX_ENUM, DEFAULT_RESTARTS,
};
pub use metric::{
    validate_metric, FiniteMetricSpace, MetricError, PointSet, PointedSpace, DEFAULT_TOL,
};
pub use pointed::{
    ball_sandwich_check, is_lcl, is_multipointed_gha, is_pointed_gha, map_convergence,
    pgh_distance, point_convergence, sequence_convergence, smallest_certified_eps, triangle_check,
    BallSandwich, DistanceInterval, PointedError, SpaceSequence, TriangleReport,
};
pub use stability::{
    build_conjugacy, calibrate_eps_bar, estimate_expansivity, gamma_from, gamma_implication_check,
    is_pseudo_orbit, separation_time, shadowing_points, stability_report, traces, ConjugacyParams,
    ConjugacyResult, PseudoOrbit, ScaleFunction, ShadowReport, StabilityError, StabilityReport,
    StabilitySearch, StabilityVerdict,
};
pub use systems::GridSpec;
