use boundary_data::QuasiCircle;

use crate::mesh::DiskMesh;
use crate::umbilic::umbilic_height;

/// How the asymptotic boundary datum is carried to the finite radius.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Truncation {
    /// Impose `g(alpha)` directly.
    Bare,
    /// Impose `g(alpha)` plus the height the umbilic surface with the same
    /// mean curvature still has at radius `R_max`.
    #[default]
    UmbilicTail,
}

/// Profile `g` at the boundary ring angles.
pub fn boundary_values(gamma: &QuasiCircle, mesh: &DiskMesh) -> Vec<f64> {
    (0..mesh.n_theta).map(|j| gamma.profile(mesh.sector_angle(j))).collect()
}

/// Height at hyperbolic radius `r` of the umbilic surface of mean curvature `h`.
pub fn umbilic_tail(h: f64, r: f64) -> f64 {
    umbilic_height((-h).atan(), r.cosh())
}

/// Dirichlet data for mean curvature `h`.
pub fn dirichlet_data(gamma: &QuasiCircle, mesh: &DiskMesh, h: f64, truncation: Truncation) -> Vec<f64> {
    let mut g = boundary_values(gamma, mesh);
    if truncation == Truncation::UmbilicTail {
        let t = umbilic_tail(h, mesh.r_max);
        g.iter_mut().for_each(|x| *x += t);
    }
    g
}

/// Poisson extension of boundary-ring values to every node: Fourier mode `k`
/// decays like `(tanh(r/2) / tanh(R/2))^k`. Hyperbolic and Euclidean harmonic
/// functions agree in two dimensions, so this is the harmonic extension.
pub fn harmonic_extension(mesh: &DiskMesh, boundary: &[f64]) -> Vec<f64> {
    let n = mesh.n_theta;
    let half = n / 2;
    let mut cos_c = vec![0.0; half + 1];
    let mut sin_c = vec![0.0; half + 1];
    for k in 0..=half {
        let scale = if k == 0 || k == half { 1.0 } else { 2.0 } / n as f64;
        for (j, b) in boundary.iter().enumerate() {
            let a = mesh.sector_angle(j) * k as f64;
            cos_c[k] += scale * b * a.cos();
            sin_c[k] += scale * b * a.sin();
        }
    }
    let t_max = (0.5 * mesh.r_max).tanh();
    let mut u: Vec<f64> = (0..mesh.n_nodes())
        .map(|node| {
            let (r, th) = mesh.polar(node);
            let q = (0.5 * r).tanh() / t_max;
            let mut qk = 1.0;
            let mut acc = 0.0;
            for k in 0..=half {
                let a = th * k as f64;
                acc += qk * (cos_c[k] * a.cos() + sin_c[k] * a.sin());
                qk *= q;
            }
            acc
        })
        .collect();
    u[mesh.n_interior()..].copy_from_slice(boundary);
    u
}
