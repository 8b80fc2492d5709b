//! Left and right projections of a spacelike surface onto the base plane
//! `x3 = 0`, the extension `Phi = Pi_r o Pi_l^{-1}` they induce, its
//! dilatation, and the landslide angle read off the Hopf differentials.

mod error;
mod extension;
mod landslide;
mod ruling;

pub use error::QcError;
pub use extension::{
    beltrami, build_extension, max_dilatation, mu_formula, principal_frame, quasiconformal_constant,
    DilatationReport, ExtensionField, NodeExtension, NEAR_DEGENERATE_K,
};
pub use landslide::{
    angle_distance_mod_pi, expected_landslide_angle, landslide_angle, HopfField, Landslide, NodeHopf,
    MIN_UNMASKED_FRACTION,
};
pub use ruling::{project_lr, tangent_plane_ruling};
