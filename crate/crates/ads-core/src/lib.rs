//! Three-dimensional anti-de Sitter space in the models used by the solver.
//!
//! Points are lifts to the quadric `<x,x> = -1` in R^{2,2} with the form
//! `-x0 y0 + x1 y1 + x2 y2 - x3 y3`. The product model writes a point as a
//! disk coordinate `z` and a time `t`; the matrix model identifies R^{2,2}
//! with 2x2 real matrices so that an isometry is a pair `(A, B)` of
//! `SL(2,R)` matrices acting by `M -> A M B^T`. The boundary at infinity is
//! a torus with coordinates `(theta_l, theta_r)`, one per ruling.

mod boundary;
mod causal;
mod error;
mod isometry;
mod point;

pub use boundary::{angle_diff, wrap_two_pi, BoundaryPoint};
pub use causal::{
    continuous_null_lift, dual_plane, in_domain_of_dependence, timelike_distance, SpacelikePlane,
    DEFAULT_TOL_DD,
};
pub use error::AdsError;
pub use isometry::{
    disk_mobius, from_matrix, projective_angle_action, rotation_matrix, sl2_from_disk_mobius,
    to_matrix, Isometry,
};
pub use point::{
    disk_to_hyperboloid, hyperboloid_to_disk, inner, is_future, killing, product_to_quadric,
    quadric_to_product, ProductPoint, SpacetimePoint, QUADRIC_TOL,
};

pub use nalgebra::{Matrix2, Matrix4, Vector4};
pub use num_complex::Complex64;
