//! Boundary data for the asymptotic Plateau problem: circle homeomorphisms,
//! their cross-ratio distortion, and the graph curve they trace on the
//! boundary torus.

mod cross_ratio;
mod error;
mod interp;
mod qsmap;
mod quasicircle;

pub use cross_ratio::{cross_ratio, qs_norm_estimate, qs_norm_estimate_seeded, QsNormEstimate, L_MAX};
pub use error::BoundaryError;
pub use interp::PeriodicMonotoneCubic;
pub use qsmap::{Family, QuasiSymmetricMap};
pub use quasicircle::{make_quasicircle, QuasiCircle, DEFAULT_N_SAMPLES, MIN_ACAUSAL_MARGIN};
