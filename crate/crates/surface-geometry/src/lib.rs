//! Extrinsic geometry of spacelike surfaces given as embedded point sets on
//! the polar mesh.
//!
//! Conventions follow the solver: `B = -grad nu` with `nu` the future unit
//! normal, `H = tr(B) / 2`, principal curvatures `H +- lambda`, and Gauss
//! curvature `K = -1 - det B`.

mod algebra;
mod checks;
mod error;
mod fit;
mod flow;

pub use algebra::{convexity_window, equidistant_operators, flat_cmc_offset, rotation_j, PointForms};
pub use checks::{
    beta_residual, beta_residual_fields, principal_bounds, principal_bounds_check, BetaResidual, BoundsReport,
    BETA_CORE_RADIUS, LAMBDA_MIN,
};
pub use error::GeometryError;
pub use fit::{compute_forms, compute_forms_embedded, parameter_gradient, EmbeddedSurface, FundamentalForms, NodeForms, EXCLUDED_OUTER_RINGS};
pub use flow::normal_flow;
