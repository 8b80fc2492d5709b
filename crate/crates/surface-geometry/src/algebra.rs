//! Pointwise linear algebra of the shape operator.

use std::f64::consts::FRAC_PI_2;

use nalgebra::Matrix2;

use crate::error::GeometryError;

/// Shape data at one point, in some coordinate basis of the tangent plane.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PointForms {
    /// First fundamental form.
    pub i: Matrix2<f64>,
    /// Second fundamental form `II(X, Y) = <B X, Y>`.
    pub ii: Matrix2<f64>,
    /// Shape operator `I^{-1} II`.
    pub b: Matrix2<f64>,
    /// Half the trace of `b`.
    pub h: f64,
    /// Positive eigenvalue of the traceless part of `b`.
    pub lambda: f64,
    /// Gauss curvature `-1 - det b`.
    pub k: f64,
    /// `log lambda`; `-inf` at umbilic points.
    pub beta: f64,
    /// Rotation by `+pi/2` for `i`.
    pub j: Matrix2<f64>,
}

/// Rotation by `+pi/2` in the metric `i`, positively oriented in the coordinates.
pub fn rotation_j(i: &Matrix2<f64>) -> Matrix2<f64> {
    let s = i.determinant().sqrt();
    Matrix2::new(-i[(0, 1)], -i[(1, 1)], i[(0, 0)], i[(0, 1)]) / s
}

impl PointForms {
    pub fn from_forms(i: Matrix2<f64>, ii: Matrix2<f64>) -> Result<Self, GeometryError> {
        let inv = i
            .try_inverse()
            .filter(|_| i.determinant() > 0.0 && i[(0, 0)] > 0.0)
            .ok_or_else(|| GeometryError::InvalidInput("first fundamental form is not positive definite".into()))?;
        let b = inv * ii;
        let h = 0.5 * b.trace();
        let det = b.determinant();
        let lambda = (h * h - det).max(0.0).sqrt();
        Ok(Self { i, ii, b, h, lambda, k: -1.0 - det, beta: lambda.ln(), j: rotation_j(&i) })
    }

    /// Principal curvatures `(H + lambda, H - lambda)`.
    pub fn principal(&self) -> (f64, f64) {
        (self.h + self.lambda, self.h - self.lambda)
    }
}

/// First fundamental form and shape operator of the surface at timelike
/// distance `rho`: with `M = cos(rho) E + sin(rho) B`,
/// `I_rho = M^T I M` and `B_rho = M^{-1} (-sin(rho) E + cos(rho) B)`.
pub fn equidistant_operators(
    i: &Matrix2<f64>,
    b: &Matrix2<f64>,
    rho: f64,
) -> Result<(Matrix2<f64>, Matrix2<f64>), GeometryError> {
    let (s, c) = rho.sin_cos();
    let e = Matrix2::identity();
    let m = e * c + b * s;
    let det = m.determinant();
    if !(det.abs() >= 1e-10) {
        return Err(GeometryError::NonSmoothEquidistant { det, node: None });
    }
    let minv = m.try_inverse().ok_or(GeometryError::NonSmoothEquidistant { det, node: None })?;
    Ok((m.transpose() * i * m, minv * (e * (-s) + b * c)))
}

/// Distance from the flat maximal surface with principal curvatures `+-1` to
/// its flat equidistant surface of mean curvature `h`.
pub fn flat_cmc_offset(h: f64) -> f64 {
    0.5 * (-h).atan()
}

/// Open interval of distances `rho` for which the equidistant surface of any
/// surface with mean curvature `h >= 0` and `lambda <= sqrt(1 + h^2) - eps`
/// has both principal curvatures positive.
pub fn convexity_window(h: f64, eps: f64) -> Result<(f64, f64), GeometryError> {
    if !(eps > 0.0 && eps <= 1.0) {
        return Err(GeometryError::InvalidMargin(eps));
    }
    if !(h >= 0.0) {
        return Err(GeometryError::InvalidInput(format!(
            "window is stated for H >= 0 (apply t -> -t for negative H), got {h}"
        )));
    }
    let root = (1.0 + h * h).sqrt();
    let alpha = (root + h - eps).atan();
    let gamma = (h - root + eps).atan();
    Ok((alpha - FRAC_PI_2, gamma))
}
