use std::f64::consts::{PI, TAU};

use nalgebra::Vector4;

use crate::error::AdsError;
use crate::point::inner;

/// Reduces an angle to `[0, 2pi)`.
pub fn wrap_two_pi(a: f64) -> f64 {
    let r = a.rem_euclid(TAU);
    if r >= TAU {
        0.0
    } else {
        r
    }
}

/// Signed difference `a - b` reduced to `(-pi, pi]`.
pub fn angle_diff(a: f64, b: f64) -> f64 {
    let d = (a - b).rem_euclid(TAU);
    if d > PI {
        d - TAU
    } else {
        d
    }
}

/// A point of the boundary torus, stored in ruling coordinates.
///
/// The product-model asymptotic coordinates are `alpha = (theta_l + theta_r)/2`
/// and `tau = (theta_r - theta_l)/2`, so the boundary of the plane `t = 0`
/// is the diagonal `theta_l = theta_r`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BoundaryPoint {
    pub theta_l: f64,
    pub theta_r: f64,
}

impl BoundaryPoint {
    pub fn new(theta_l: f64, theta_r: f64) -> Self {
        Self {
            theta_l: wrap_two_pi(theta_l),
            theta_r: wrap_two_pi(theta_r),
        }
    }

    pub fn from_alpha_tau(alpha: f64, tau: f64) -> Self {
        Self::new(alpha - tau, alpha + tau)
    }

    /// Returns `(alpha, tau)` with `alpha` in `[0, 2pi)` and `tau` in `(-pi, pi)`.
    pub fn alpha_tau(&self) -> (f64, f64) {
        let alpha = 0.5 * (self.theta_l + self.theta_r);
        let tau = 0.5 * (self.theta_r - self.theta_l);
        (alpha, tau)
    }

    /// Null representative `(cos tau, cos alpha, sin alpha, sin tau)`.
    pub fn null_lift(&self) -> Vector4<f64> {
        let (alpha, tau) = self.alpha_tau();
        Vector4::new(tau.cos(), alpha.cos(), alpha.sin(), tau.sin())
    }

    /// Boundary point of a nonzero null vector; `v` and `-v` give the same point.
    pub fn from_null(v: &Vector4<f64>) -> Result<Self, AdsError> {
        let scale = v[0].hypot(v[3]);
        let tol = 1e-9 * v.norm_squared().max(f64::MIN_POSITIVE);
        if !(scale > 0.0) || inner(v, v).abs() > tol {
            return Err(AdsError::NotNull);
        }
        let tau = v[3].atan2(v[0]);
        let alpha = v[2].atan2(v[1]);
        Ok(Self::from_alpha_tau(alpha, tau))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn diagonal_is_zero_time() {
        let b = BoundaryPoint::new(1.3, 1.3);
        let (a, t) = b.alpha_tau();
        assert!((a - 1.3).abs() < 1e-15);
        assert_eq!(t, 0.0);
    }

    #[test]
    fn lift_is_null_and_recovered() {
        let b = BoundaryPoint::from_alpha_tau(2.0, 0.4);
        let v = b.null_lift();
        assert!(inner(&v, &v).abs() < 1e-15);
        let back = BoundaryPoint::from_null(&(-3.0 * v)).unwrap();
        assert!(angle_diff(back.theta_l, b.theta_l).abs() < 1e-12);
        assert!(angle_diff(back.theta_r, b.theta_r).abs() < 1e-12);
    }

    #[test]
    fn wrap_edges() {
        assert_eq!(wrap_two_pi(-1e-20), 0.0);
        assert!((angle_diff(0.1, TAU - 0.1) - 0.2).abs() < 1e-15);
    }
}
