use std::f64::consts::FRAC_PI_2;

use crate::error::SolverError;
use crate::mesh::DiskMesh;
use crate::newton::SurfaceSolution;

/// Height over a point with `chi = cosh r` of the surface at signed distance
/// `rho` from the plane `t = 0`, measured toward the past.
pub fn umbilic_height(rho: f64, chi: f64) -> f64 {
    -(rho.sin() / chi).asin()
}

/// Mean curvature of that surface.
pub fn umbilic_mean_curvature(rho: f64) -> f64 {
    -rho.tan()
}

/// Heights of the distance-`rho` equidistant surface sampled on the mesh.
pub fn exact_umbilic(rho: f64, mesh: &DiskMesh) -> Result<SurfaceSolution, SolverError> {
    if !(rho.abs() < FRAC_PI_2) {
        return Err(SolverError::InvalidInput(format!("|rho| must be below pi/2, got {rho}")));
    }
    let u = (0..mesh.n_nodes()).map(|n| umbilic_height(rho, mesh.chi(n))).collect();
    Ok(SurfaceSolution::from_heights(mesh, umbilic_mean_curvature(rho), u))
}
