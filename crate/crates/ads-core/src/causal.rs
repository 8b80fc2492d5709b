use nalgebra::Vector4;

use crate::boundary::BoundaryPoint;
use crate::error::AdsError;
use crate::point::{inner, SpacetimePoint};

/// Zero band for the sign sweep in [`in_domain_of_dependence`].
pub const DEFAULT_TOL_DD: f64 = 1e-9;

/// Totally geodesic spacelike plane `{x : <x, dual> = 0}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacelikePlane {
    pub dual: SpacetimePoint,
}

impl SpacelikePlane {
    pub fn contains(&self, x: &SpacetimePoint, tol: f64) -> bool {
        self.dual.inner(x).abs() <= tol
    }
}

pub fn dual_plane(p: &SpacetimePoint) -> Result<SpacelikePlane, AdsError> {
    p.validate()?;
    Ok(SpacelikePlane { dual: *p })
}

/// Lorentzian distance `arccos(-<p,q>)` between timelike-related points
/// joined by a timelike geodesic.
pub fn timelike_distance(p: &SpacetimePoint, q: &SpacetimePoint) -> Result<f64, AdsError> {
    p.validate()?;
    q.validate()?;
    let c = -p.inner(q);
    if !(-1.0 - 1e-12..=1.0 + 1e-12).contains(&c) {
        return Err(AdsError::NotTimelikeRelated { inner: -c });
    }
    Ok(c.clamp(-1.0, 1.0).acos())
}

/// Null representatives scaled to `x0^2 + x3^2 = 1`, with signs chosen so
/// that consecutive representatives have positive Euclidean pairing.
pub fn continuous_null_lift(curve: &[BoundaryPoint]) -> Result<Vec<Vector4<f64>>, AdsError> {
    const MIN_PAIRING: f64 = 0.5;
    if curve.len() < 3 {
        return Err(AdsError::TooFewSamples {
            needed: 3,
            got: curve.len(),
        });
    }
    let mut out: Vec<Vector4<f64>> = Vec::with_capacity(curve.len());
    for (k, b) in curve.iter().enumerate() {
        let v = b.null_lift();
        let mut v = v / v[0].hypot(v[3]);
        if let Some(prev) = out.last() {
            let d = prev.dot(&v);
            if d < 0.0 {
                v = -v;
            }
            if d.abs() < MIN_PAIRING {
                return Err(AdsError::BadLift { index: k });
            }
        }
        out.push(v);
    }
    let closing = out[out.len() - 1].dot(&out[0]);
    if closing < MIN_PAIRING {
        return Err(AdsError::BadLift { index: 0 });
    }
    Ok(out)
}

/// True when the dual plane of `p` misses the sampled curve: the pairing of
/// `p` with a continuous null lift keeps one sign and stays outside `[-tol, tol]`.
pub fn in_domain_of_dependence(
    p: &SpacetimePoint,
    curve: &[BoundaryPoint],
    tol: f64,
) -> Result<bool, AdsError> {
    p.validate()?;
    let lift = continuous_null_lift(curve)?;
    let mut pos = false;
    let mut neg = false;
    for v in &lift {
        let s = inner(v, &p.0);
        if s.abs() <= tol {
            return Ok(false);
        }
        if s > 0.0 {
            pos = true;
        } else {
            neg = true;
        }
        if pos && neg {
            return Ok(false);
        }
    }
    Ok(true)
}
