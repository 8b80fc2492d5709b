use nalgebra::Vector4;
use num_complex::Complex64;

use crate::error::AdsError;

/// Tolerance for accepting a vector as a point of the quadric.
pub const QUADRIC_TOL: f64 = 1e-10;

/// The bilinear form of signature (2,2).
#[inline]
pub fn inner(a: &Vector4<f64>, b: &Vector4<f64>) -> f64 {
    -a[0] * b[0] + a[1] * b[1] + a[2] * b[2] - a[3] * b[3]
}

/// Generator of the time translations `t -> t + s` evaluated at `x`.
#[inline]
pub fn killing(x: &Vector4<f64>) -> Vector4<f64> {
    Vector4::new(-x[3], 0.0, 0.0, x[0])
}

/// A timelike vector `v` at `x` is future directed when it pairs negatively
/// with the time translation field.
#[inline]
pub fn is_future(x: &Vector4<f64>, v: &Vector4<f64>) -> bool {
    inner(v, &killing(x)) < 0.0
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpacetimePoint(pub Vector4<f64>);

impl SpacetimePoint {
    pub fn new(x0: f64, x1: f64, x2: f64, x3: f64) -> Self {
        Self(Vector4::new(x0, x1, x2, x3))
    }

    /// Builds a point and rejects vectors off the quadric.
    pub fn checked(x: Vector4<f64>) -> Result<Self, AdsError> {
        let p = Self(x);
        p.validate()?;
        Ok(p)
    }

    pub fn origin() -> Self {
        Self::new(1.0, 0.0, 0.0, 0.0)
    }

    pub fn norm_sq(&self) -> f64 {
        inner(&self.0, &self.0)
    }

    pub fn inner(&self, other: &Self) -> f64 {
        inner(&self.0, &other.0)
    }

    pub fn validate(&self) -> Result<(), AdsError> {
        let n = self.norm_sq();
        if (n + 1.0).abs() <= QUADRIC_TOL && n.is_finite() {
            Ok(())
        } else {
            Err(AdsError::OffQuadric { norm: n })
        }
    }
}

/// Disk coordinate and time of the product model.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ProductPoint {
    pub z: Complex64,
    pub t: f64,
}

impl ProductPoint {
    pub fn new(z: Complex64, t: f64) -> Result<Self, AdsError> {
        let m = z.norm();
        if m.is_finite() && m < 1.0 {
            Ok(Self { z, t })
        } else {
            Err(AdsError::InvalidDiskPoint { modulus: m })
        }
    }

    /// Hyperboloid height `(1+|z|^2)/(1-|z|^2)`, the lapse of the product metric.
    pub fn chi(&self) -> f64 {
        let s = self.z.norm_sqr();
        (1.0 + s) / (1.0 - s)
    }
}

/// Poincare disk to the hyperboloid sheet `(x0, x1, x2)`.
pub fn disk_to_hyperboloid(z: Complex64) -> [f64; 3] {
    let s = z.norm_sqr();
    let d = 1.0 - s;
    [(1.0 + s) / d, 2.0 * z.re / d, 2.0 * z.im / d]
}

/// Inverse of [`disk_to_hyperboloid`] for a point with `x0 >= 1`.
pub fn hyperboloid_to_disk(x0: f64, x1: f64, x2: f64) -> Complex64 {
    Complex64::new(x1, x2) / (1.0 + x0)
}

pub fn product_to_quadric(p: &ProductPoint) -> Result<SpacetimePoint, AdsError> {
    let p = ProductPoint::new(p.z, p.t)?;
    let [chi, x1, x2] = disk_to_hyperboloid(p.z);
    let (s, c) = p.t.sin_cos();
    Ok(SpacetimePoint::new(chi * c, x1, x2, chi * s))
}

/// Inverse of [`product_to_quadric`]; the time is returned in `(-pi, pi]`.
pub fn quadric_to_product(x: &SpacetimePoint) -> Result<ProductPoint, AdsError> {
    x.validate()?;
    let v = &x.0;
    let chi = v[0].hypot(v[3]);
    let t = v[3].atan2(v[0]);
    ProductPoint::new(hyperboloid_to_disk(chi, v[1], v[2]), t)
}
