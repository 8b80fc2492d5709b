use nalgebra::{Complex, Matrix2, Matrix4, Vector2, Vector4};
use num_complex::Complex64;

use crate::boundary::{wrap_two_pi, BoundaryPoint};
use crate::error::AdsError;
use crate::point::SpacetimePoint;

const DET_TOL: f64 = 1e-10;

/// `x -> [[x0+x1, x2+x3], [x2-x3, x0-x1]]`; the determinant is `-<x,x>`.
pub fn to_matrix(x: &Vector4<f64>) -> Matrix2<f64> {
    Matrix2::new(x[0] + x[1], x[2] + x[3], x[2] - x[3], x[0] - x[1])
}

pub fn from_matrix(m: &Matrix2<f64>) -> Vector4<f64> {
    Vector4::new(
        0.5 * (m[(0, 0)] + m[(1, 1)]),
        0.5 * (m[(0, 0)] - m[(1, 1)]),
        0.5 * (m[(0, 1)] + m[(1, 0)]),
        0.5 * (m[(0, 1)] - m[(1, 0)]),
    )
}

/// Standard rotation `[[cos, -sin], [sin, cos]]`.
pub fn rotation_matrix(phi: f64) -> Matrix2<f64> {
    let (s, c) = phi.sin_cos();
    Matrix2::new(c, -s, s, c)
}

/// Action of `m` on boundary angles: the angle `theta` is the doubled
/// argument of the line through `(cos theta/2, sin theta/2)`.
pub fn projective_angle_action(m: &Matrix2<f64>, theta: f64) -> f64 {
    let (s, c) = (0.5 * theta).sin_cos();
    let w = m * Vector2::new(c, s);
    wrap_two_pi(2.0 * w[1].atan2(w[0]))
}

/// The disk automorphism `z -> e^{i rot} (z - a) / (1 - conj(a) z)`.
pub fn disk_mobius(a: Complex64, rot: f64, z: Complex64) -> Complex64 {
    Complex64::from_polar(1.0, rot) * (z - a) / (Complex64::new(1.0, 0.0) - a.conj() * z)
}

/// `SL(2,R)` matrix whose [`projective_angle_action`] is the boundary
/// action of [`disk_mobius`] with the same parameters.
pub fn sl2_from_disk_mobius(a: Complex64, rot: f64) -> Result<Matrix2<f64>, AdsError> {
    if !(a.norm() < 1.0) {
        return Err(AdsError::InvalidDiskPoint { modulus: a.norm() });
    }
    type C = Complex<f64>;
    let h = Complex64::from_polar(1.0, 0.5 * rot);
    let d = nalgebra::Matrix2::<C>::new(h, -a * h, -a.conj() / h, C::new(1.0, 0.0) / h);
    // Cayley transform s -> (1 + i s)/(1 - i s) sends tan(theta/2) to e^{i theta}.
    let i = C::new(0.0, 1.0);
    let one = C::new(1.0, 0.0);
    let cay = nalgebra::Matrix2::<C>::new(i, one, -i, one);
    let cay_inv = cay.try_inverse().ok_or(AdsError::NotUnimodular { det: 0.0 })?;
    let s = cay_inv * d * cay;
    // s acts on the slope by (s00 q + s01)/(s10 q + s11); a ruling matrix acts
    // on the slope by (m11 q + m10)/(m01 q + m00).
    let big = [s[(0, 0)], s[(0, 1)], s[(1, 0)], s[(1, 1)]]
        .into_iter()
        .max_by(|x, y| x.norm().total_cmp(&y.norm()))
        .unwrap_or(one);
    let phase = big / big.norm();
    let r = s.map(|e| (e / phase).re);
    let m = Matrix2::new(r[(1, 1)], r[(1, 0)], r[(0, 1)], r[(0, 0)]);
    let det = m.determinant();
    if !(det > 0.0) {
        return Err(AdsError::NotUnimodular { det });
    }
    Ok(m / det.sqrt())
}

/// An orientation and time-orientation preserving isometry, stored as its
/// ruling pair together with the induced linear map of R^{2,2}.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Isometry {
    pub ruling_a: Matrix2<f64>,
    pub ruling_b: Matrix2<f64>,
    pub matrix4: Matrix4<f64>,
}

impl Isometry {
    pub fn new(a: Matrix2<f64>, b: Matrix2<f64>) -> Result<Self, AdsError> {
        for m in [&a, &b] {
            let det = m.determinant();
            if (det - 1.0).abs() > DET_TOL {
                return Err(AdsError::NotUnimodular { det });
            }
        }
        let mut matrix4 = Matrix4::zeros();
        for k in 0..4 {
            let mut e = Vector4::zeros();
            e[k] = 1.0;
            let col = from_matrix(&(a * to_matrix(&e) * b.transpose()));
            matrix4.set_column(k, &col);
        }
        Ok(Self {
            ruling_a: a,
            ruling_b: b,
            matrix4,
        })
    }

    pub fn identity() -> Self {
        Self::new(Matrix2::identity(), Matrix2::identity()).expect("identity is unimodular")
    }

    /// Time translation `t -> t + s` in the product model.
    pub fn time_translation(s: f64) -> Self {
        let (sn, c) = (0.5 * s).sin_cos();
        let r = Matrix2::new(c, sn, -sn, c);
        Self::new(r, r.transpose()).expect("rotation is unimodular")
    }

    /// Rotation `alpha -> alpha + c` about the time axis through the origin.
    pub fn rotation(c: f64) -> Self {
        let r = rotation_matrix(0.5 * c);
        Self::new(r, r).expect("rotation is unimodular")
    }

    /// `self o other`.
    pub fn compose(&self, other: &Self) -> Self {
        Self::new(self.ruling_a * other.ruling_a, self.ruling_b * other.ruling_b)
            .expect("product of unimodular matrices")
    }

    pub fn inverse(&self) -> Self {
        let inv = |m: &Matrix2<f64>| Matrix2::new(m[(1, 1)], -m[(0, 1)], -m[(1, 0)], m[(0, 0)]);
        Self::new(inv(&self.ruling_a), inv(&self.ruling_b)).expect("inverse is unimodular")
    }

    /// Linear action on any vector of R^{2,2}, through the ruling pair.
    pub fn apply_vec(&self, v: &Vector4<f64>) -> Vector4<f64> {
        from_matrix(&(self.ruling_a * to_matrix(v) * self.ruling_b.transpose()))
    }

    pub fn apply(&self, p: &SpacetimePoint) -> SpacetimePoint {
        SpacetimePoint(self.apply_vec(&p.0))
    }

    /// Same action through the 4x4 representation.
    pub fn apply_matrix4(&self, v: &Vector4<f64>) -> Vector4<f64> {
        self.matrix4 * v
    }

    pub fn apply_boundary(&self, b: &BoundaryPoint) -> BoundaryPoint {
        BoundaryPoint::new(
            projective_angle_action(&self.ruling_a, b.theta_l),
            projective_angle_action(&self.ruling_b, b.theta_r),
        )
    }
}
