use std::f64::consts::{FRAC_PI_2, TAU};

use ads_core::{in_domain_of_dependence, BoundaryPoint, SpacetimePoint, DEFAULT_TOL_DD};

use crate::error::BoundaryError;
use crate::qsmap::QuasiSymmetricMap;

pub const DEFAULT_N_SAMPLES: usize = 1024;
/// Smallest admissible `1 - max |dg/dalpha|` over sample intervals.
pub const MIN_ACAUSAL_MARGIN: f64 = 1e-6;
const MIN_SAMPLES: usize = 64;

/// The graph `theta_r = phi(theta_l)` on the boundary torus, together with its
/// product-model profile `tau = g(alpha)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiCircle {
    phi: QuasiSymmetricMap,
    pub boundary_points: Vec<BoundaryPoint>,
    /// Lifted, strictly increasing; spans one turn starting at `alpha[0]`.
    pub alpha: Vec<f64>,
    pub tau: Vec<f64>,
    pub acausal_margin: f64,
}

pub fn make_quasicircle(phi: &QuasiSymmetricMap, n_samples: usize) -> Result<QuasiCircle, BoundaryError> {
    if n_samples < MIN_SAMPLES {
        return Err(BoundaryError::TooFewSamples {
            needed: MIN_SAMPLES,
            got: n_samples,
        });
    }
    let samples = phi.samples(n_samples);
    let mut alpha = Vec::with_capacity(n_samples);
    let mut tau = Vec::with_capacity(n_samples);
    let mut points = Vec::with_capacity(n_samples);
    for (i, &(t, p)) in samples.iter().enumerate() {
        let next = if i + 1 < n_samples {
            samples[i + 1].1
        } else {
            samples[0].1 + TAU
        };
        if !(next > p) || !p.is_finite() {
            return Err(BoundaryError::NotAHomeomorphism { index: i });
        }
        let a = 0.5 * (t + p);
        let g = 0.5 * (p - t);
        if !(g.abs() < FRAC_PI_2) {
            return Err(BoundaryError::NotInChart { alpha: a, tau: g });
        }
        alpha.push(a);
        tau.push(g);
        points.push(BoundaryPoint::new(t, p));
    }
    let mut max_slope: f64 = 0.0;
    for i in 0..n_samples {
        let (a1, g1) = if i + 1 < n_samples {
            (alpha[i + 1], tau[i + 1])
        } else {
            (alpha[0] + TAU, tau[0])
        };
        max_slope = max_slope.max(((g1 - tau[i]) / (a1 - alpha[i])).abs());
    }
    let margin = 1.0 - max_slope;
    if !(margin >= MIN_ACAUSAL_MARGIN) {
        return Err(BoundaryError::NotAcausal { margin });
    }
    Ok(QuasiCircle {
        phi: phi.clone(),
        boundary_points: points,
        alpha,
        tau,
        acausal_margin: margin,
    })
}

impl QuasiCircle {
    pub fn map(&self) -> &QuasiSymmetricMap {
        &self.phi
    }

    /// Solves `(theta + phi(theta))/2 = alpha` for `theta`.
    pub fn theta_l_at(&self, alpha: f64) -> f64 {
        let a0 = self.alpha[0];
        let turns = ((alpha - a0) / TAU).floor();
        let a = alpha - TAU * turns;
        let n = self.alpha.len();
        let i = self.alpha.partition_point(|&v| v <= a).saturating_sub(1);
        let h = TAU / n as f64;
        let mut lo = h * i as f64;
        let mut hi = lo + h;
        let f = |t: f64| 0.5 * (t + self.phi.eval(t)) - a;
        // f is strictly increasing with f(lo) <= 0 < f(hi).
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if mid <= lo || mid >= hi {
                break;
            }
            if f(mid) <= 0.0 {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let t = if f(hi).abs() < f(lo).abs() { hi } else { lo };
        t + TAU * turns
    }

    /// Profile `g(alpha) = (phi(theta) - theta)/2` at the matching `theta`.
    pub fn profile(&self, alpha: f64) -> f64 {
        let t = self.theta_l_at(alpha);
        0.5 * (self.phi.eval(t) - t)
    }

    pub fn max_abs_profile(&self) -> f64 {
        self.tau.iter().fold(0.0f64, |m, g| m.max(g.abs()))
    }

    /// Domain-of-dependence membership against the sampled curve.
    pub fn contains_in_domain(&self, p: &SpacetimePoint) -> Result<bool, BoundaryError> {
        Ok(in_domain_of_dependence(p, &self.boundary_points, DEFAULT_TOL_DD)?)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use ads_core::Complex64;
    use std::f64::consts::TAU;

    #[test]
    fn identity_profile_is_zero() {
        let qc = make_quasicircle(&QuasiSymmetricMap::identity(), 128).unwrap();
        assert!(qc.tau.iter().all(|&g| g == 0.0));
        for k in 0..50 {
            assert_eq!(qc.profile(0.37 * k as f64), 0.0);
        }
    }

    #[test]
    fn rotation_profile_is_constant() {
        let c = 0.2;
        let m = QuasiSymmetricMap::mobius(Complex64::new(0.0, 0.0), 2.0 * c).unwrap();
        let qc = make_quasicircle(&m, 256).unwrap();
        for k in 0..50 {
            assert!((qc.profile(0.41 * k as f64 - 3.0) - c).abs() < 1e-14);
        }
    }

    #[test]
    fn leaving_chart_rejected() {
        let theta: Vec<f64> = (0..16).map(|k| TAU * k as f64 / 16.0).collect();
        let phi: Vec<f64> = theta.iter().map(|t| t + 3.5).collect();
        let m = QuasiSymmetricMap::from_samples(theta, phi).unwrap();
        assert!(matches!(
            make_quasicircle(&m, 128),
            Err(BoundaryError::NotInChart { .. })
        ));
    }

    #[test]
    fn too_few_samples() {
        assert!(make_quasicircle(&QuasiSymmetricMap::identity(), 63).is_err());
    }
}
