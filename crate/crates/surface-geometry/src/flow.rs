use crate::algebra::equidistant_operators;
use crate::error::GeometryError;
use crate::fit::{EmbeddedSurface, FundamentalForms};

/// Moves each node a timelike distance `rho` along the normal geodesic toward
/// the past: `cos(rho) x - sin(rho) nu` with `nu` the future normal. This is
/// the direction in which `equidistant_operators` describes the result.
pub fn normal_flow(forms: &FundamentalForms, rho: f64) -> Result<EmbeddedSurface, GeometryError> {
    let (s, c) = rho.sin_cos();
    for f in &forms.nodes {
        equidistant_operators(&f.shape.i, &f.shape.b, rho).map_err(|e| match e {
            GeometryError::NonSmoothEquidistant { det, .. } => {
                GeometryError::NonSmoothEquidistant { det, node: Some(f.node) }
            }
            other => other,
        })?;
    }
    let points = forms.nodes.iter().map(|f| f.point * c - f.normal * s).collect();
    Ok(EmbeddedSurface { mesh: forms.surface.mesh, points })
}
