//! Spacelike constant mean curvature graphs `t = u(z)` over a truncated
//! hyperbolic disk, in the product model of AdS3.
//!
//! Sign convention: the shape operator is `B = -grad nu` for the future unit
//! normal `nu`, and `H = tr(B) / 2`. With it, the surface at distance `rho`
//! to the past of the plane `t = 0` has `H = -tan(rho)`, and leaves of the
//! foliation move to the future as `H` increases.

mod bc;
mod error;
mod mesh;
mod newton;
mod stencil;
mod sweep;
mod umbilic;

pub use bc::{boundary_values, dirichlet_data, harmonic_extension, umbilic_tail, Truncation};
pub use error::SolverError;
pub use mesh::{build_mesh, DiskMesh, NodeIndex, MIN_N_R, MIN_N_THETA, R_MAX_RANGE};
pub use newton::{gradient_norm_sq, residual, solve, JacobianKind, SolverOptions, SurfaceSolution};
pub use sweep::{check_monotone, sweep_foliation, FoliationSweep, MonotonicityReport, SweepOptions, MAX_ABS_H};
pub use umbilic::{exact_umbilic, umbilic_height, umbilic_mean_curvature};
