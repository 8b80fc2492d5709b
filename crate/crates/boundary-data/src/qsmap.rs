use std::f64::consts::TAU;

use ads_core::{angle_diff, disk_mobius, Complex64};

use crate::error::BoundaryError;
use crate::interp::PeriodicMonotoneCubic;

/// Parametric families of boundary maps.
#[derive(Debug, Clone, PartialEq)]
pub enum Family {
    Identity,
    /// Boundary values of `z -> e^{i rot} (z - a) / (1 - conj(a) z)`.
    Mobius { a: Complex64, rot: f64 },
    /// `theta -> theta + amplitude * sin(frequency * theta)`.
    Trig { amplitude: f64, frequency: u32 },
    /// Piecewise Mobius map fixing `0` and `pi`: the identity on `[0, pi]` and
    /// the hyperbolic map `cot(phi/2) = e^shear cot(theta/2)` on `[pi, 2pi]`.
    Shear { shear: f64 },
    /// Monotone cubic interpolation of user samples.
    Sampled(PeriodicMonotoneCubic),
}

/// An increasing degree-one circle homeomorphism, evaluated on lifted angles:
/// `eval(theta + 2pi) = eval(theta) + 2pi`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuasiSymmetricMap {
    family: Family,
    pre: Option<(Complex64, f64)>,
}

fn lift_near(theta: f64, angle: f64) -> f64 {
    theta + angle_diff(angle, theta)
}

impl QuasiSymmetricMap {
    pub fn identity() -> Self {
        Self { family: Family::Identity, pre: None }
    }

    pub fn mobius(a: Complex64, rot: f64) -> Result<Self, BoundaryError> {
        if !(a.norm() < 1.0) || !rot.is_finite() {
            return Err(BoundaryError::InvalidParameter(format!(
                "mobius needs |a| < 1, got {}",
                a.norm()
            )));
        }
        Ok(Self { family: Family::Mobius { a, rot }, pre: None })
    }

    pub fn trig(amplitude: f64, frequency: u32) -> Result<Self, BoundaryError> {
        if frequency == 0 || !((amplitude * frequency as f64).abs() < 1.0) {
            return Err(BoundaryError::InvalidParameter(format!(
                "trig needs |a k| < 1 and k >= 1, got a = {amplitude}, k = {frequency}"
            )));
        }
        Ok(Self { family: Family::Trig { amplitude, frequency }, pre: None })
    }

    pub fn shear(shear: f64) -> Result<Self, BoundaryError> {
        if !shear.is_finite() {
            return Err(BoundaryError::InvalidParameter("shear must be finite".into()));
        }
        Ok(Self { family: Family::Shear { shear }, pre: None })
    }

    /// Interpolates increasing samples `(theta_i, phi_i)` with `theta_i` in `[0, 2pi)`.
    pub fn from_samples(theta: Vec<f64>, phi: Vec<f64>) -> Result<Self, BoundaryError> {
        Ok(Self {
            family: Family::Sampled(PeriodicMonotoneCubic::new(theta, phi)?),
            pre: None,
        })
    }

    /// `self o m` for the disk automorphism `m` with parameters `(a, rot)`.
    /// Only one precomposition is kept; composing twice replaces it.
    pub fn precompose_mobius(&self, a: Complex64, rot: f64) -> Result<Self, BoundaryError> {
        Self::mobius(a, rot)?;
        Ok(Self { family: self.family.clone(), pre: Some((a, rot)) })
    }

    pub fn family(&self) -> &Family {
        &self.family
    }

    fn eval_family(&self, theta: f64) -> f64 {
        match &self.family {
            Family::Identity => theta,
            Family::Mobius { a, rot } => {
                lift_near(theta, disk_mobius(*a, *rot, Complex64::from_polar(1.0, theta)).arg())
            }
            Family::Trig { amplitude, frequency } => {
                theta + amplitude * (*frequency as f64 * theta).sin()
            }
            Family::Shear { shear } => {
                let turns = (theta / TAU).floor();
                let w = theta - TAU * turns;
                let half = 0.5 * w;
                let image = if w <= std::f64::consts::PI {
                    w
                } else {
                    2.0 * half.sin().atan2(shear.exp() * half.cos())
                };
                image + TAU * turns
            }
            Family::Sampled(f) => f.eval(theta),
        }
    }

    /// Lifted value `phi(theta)`.
    pub fn eval(&self, theta: f64) -> f64 {
        match self.pre {
            None => self.eval_family(theta),
            Some((a, rot)) => {
                let m = lift_near(theta, disk_mobius(a, rot, Complex64::from_polar(1.0, theta)).arg());
                self.eval_family(m)
            }
        }
    }

    /// `n` equally spaced samples `(theta_i, phi(theta_i))`.
    pub fn samples(&self, n: usize) -> Vec<(f64, f64)> {
        (0..n)
            .map(|i| {
                let t = TAU * i as f64 / n as f64;
                (t, self.eval(t))
            })
            .collect()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn degree_one() {
        let maps = [
            QuasiSymmetricMap::identity(),
            QuasiSymmetricMap::mobius(Complex64::new(0.2, 0.1), 0.3).unwrap(),
            QuasiSymmetricMap::trig(0.3, 2).unwrap(),
            QuasiSymmetricMap::shear(0.8).unwrap(),
        ];
        for m in &maps {
            for k in 0..20 {
                let t = 0.31 * k as f64;
                assert!((m.eval(t + TAU) - m.eval(t) - TAU).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn shear_is_continuous_at_fixed_points() {
        let m = QuasiSymmetricMap::shear(1.2).unwrap();
        for &p in &[std::f64::consts::PI, TAU] {
            assert!((m.eval(p + 1e-9) - m.eval(p - 1e-9)).abs() < 1e-8);
        }
    }

    #[test]
    fn trig_parameter_guard() {
        assert!(QuasiSymmetricMap::trig(0.5, 2).is_err());
        assert!(QuasiSymmetricMap::trig(0.3, 3).is_ok());
    }
}
