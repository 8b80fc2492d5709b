use ads_core::{
    from_matrix, hyperboloid_to_disk, inner, is_future, to_matrix, Complex64, Isometry, Matrix2, SpacetimePoint,
    Vector4,
};

use crate::error::QcError;

const FRAME_TOL: f64 = 1e-8;

/// The isometry `g = (A, B)` taking the base frame (origin `e0`, future normal
/// `e3`) to `(x, nu)`. `A` is the symmetric positive square root determined by
/// the frame; the stabilizer of the base frame is factored out this way.
pub fn tangent_plane_ruling(x: &SpacetimePoint, nu: &Vector4<f64>) -> Result<Isometry, QcError> {
    let p = &x.0;
    let scale = 1.0 + p.norm_squared().max(nu.norm_squared());
    let checks = [
        ("<x,x> = -1", inner(p, p) + 1.0),
        ("<nu,nu> = -1", inner(nu, nu) + 1.0),
        ("<x,nu> = 0", inner(p, nu)),
    ];
    for (what, dev) in checks {
        if !(dev.abs() <= FRAME_TOL * scale) {
            return Err(QcError::InvalidFrame(format!("{what} violated by {dev:e}")));
        }
    }
    if !is_future(p, nu) {
        return Err(QcError::InvalidFrame("normal is not future directed".into()));
    }
    let mx = to_matrix(p);
    let mx = mx / mx.determinant().sqrt();
    let j0 = Matrix2::new(0.0, 1.0, -1.0, 0.0);
    let mx_inv = Matrix2::new(mx[(1, 1)], -mx[(0, 1)], -mx[(1, 0)], mx[(0, 0)]);
    // A J0 A^{-1} = M(nu) M(x)^{-1}; for symmetric A of determinant 1 the
    // left side is A^2 J0.
    let s = -(to_matrix(nu) * mx_inv) * j0;
    let s = 0.5 * (s + s.transpose());
    let det = s.determinant();
    if !(s[(0, 0)] > 0.0 && det > 0.0) {
        return Err(QcError::InvalidFrame("frame is not positively oriented".into()));
    }
    let s = s / det.sqrt();
    let a = (s + Matrix2::identity()) / (s.trace() + 2.0).sqrt();
    let a = a / a.determinant().sqrt();
    let a_inv = Matrix2::new(a[(1, 1)], -a[(0, 1)], -a[(1, 0)], a[(0, 0)]);
    let b = (a_inv * mx).transpose();
    Ok(Isometry::new(a, b / b.determinant().sqrt())?)
}

/// Point `m m^T` of the base plane, as a Poincare disk coordinate.
fn base_plane_point(m: &Matrix2<f64>) -> Complex64 {
    let v = from_matrix(&(m * m.transpose()));
    let norm = (-inner(&v, &v)).sqrt();
    hyperboloid_to_disk(v[0] / norm, v[1] / norm, v[2] / norm)
}

/// `(Pi_l(x), Pi_r(x))`: the images of `x` under the isometries from its
/// tangent plane to the base plane `x3 = 0` that follow the left and right
/// rulings at infinity, i.e. `(A, A) g^{-1}` and `(B, B) g^{-1}`.
pub fn project_lr(x: &SpacetimePoint, nu: &Vector4<f64>) -> Result<(Complex64, Complex64), QcError> {
    let g = tangent_plane_ruling(x, nu)?;
    Ok((base_plane_point(&g.ruling_a), base_plane_point(&g.ruling_b)))
}
