//! Local quadratic fits of an embedded point set in the mesh parameters.

use ads_core::{angle_diff, inner, killing, quadric_to_product, SpacetimePoint, Vector4};
use cmc_solver::{DiskMesh, NodeIndex, SurfaceSolution};
use nalgebra::{DMatrix, Matrix2, Matrix3};

use crate::algebra::PointForms;
use crate::error::GeometryError;

/// Node positions in R^{2,2} on the polar mesh layout.
#[derive(Debug, Clone, PartialEq)]
pub struct EmbeddedSurface {
    pub mesh: DiskMesh,
    pub points: Vec<Vector4<f64>>,
}

impl EmbeddedSurface {
    pub fn from_solution(sol: &SurfaceSolution) -> Result<Self, GeometryError> {
        let points = (0..sol.mesh.n_nodes())
            .map(|n| ads_core::product_to_quadric(&sol.mesh.product_point(n, sol.u[n])).map(|p| p.0))
            .collect::<Result<_, _>>()?;
        Ok(Self { mesh: sol.mesh, points })
    }
}

/// Fit results at one node.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeForms {
    pub node: usize,
    pub point: Vector4<f64>,
    /// Future unit normal.
    pub normal: Vector4<f64>,
    /// Ambient tangent vectors of the node's fit coordinates: `(d/dr, d/dtheta)`
    /// on rings, geodesic Cartesian `(d/dx, d/dy)` at the center. `shape` is
    /// expressed in this basis, which is positively oriented like `z`.
    pub tangents: [Vector4<f64>; 2],
    pub shape: PointForms,
    /// False on the boundary ring, where the stencil is one-sided.
    pub centered: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FundamentalForms {
    pub surface: EmbeddedSurface,
    /// One entry per mesh node.
    pub nodes: Vec<NodeForms>,
}

/// Rings excluded from curvature checks, counted from the boundary.
pub const EXCLUDED_OUTER_RINGS: usize = 2;

impl FundamentalForms {
    pub fn mesh(&self) -> &DiskMesh {
        &self.surface.mesh
    }

    /// Whether the node lies inside the two outermost rings.
    pub fn is_checked(&self, node: usize) -> bool {
        match self.mesh().index(node) {
            NodeIndex::Center => true,
            NodeIndex::Ring { i, .. } => i + EXCLUDED_OUTER_RINGS <= self.mesh().n_r,
        }
    }

    pub fn checked(&self) -> impl Iterator<Item = &NodeForms> {
        self.nodes.iter().filter(|f| self.is_checked(f.node))
    }
}

/// Stencil of a node as `(neighbor, parameter offset)` pairs. Ring nodes use
/// `(r, theta)` offsets on the 3x3 block (one-sided on the boundary ring; the
/// center appears once per sector since `theta` is free there). The center
/// uses geodesic Cartesian offsets to the whole first ring.
fn stencil(mesh: &DiskMesh, node: usize) -> Vec<(usize, [f64; 2])> {
    let nt = mesh.n_theta;
    let (hr, ht) = (mesh.h_r(), mesh.h_theta());
    match mesh.index(node) {
        NodeIndex::Center => (0..nt)
            .map(|j| {
                let (s, c) = mesh.sector_angle(j).sin_cos();
                (mesh.node(1, j), [hr * c, hr * s])
            })
            .collect(),
        NodeIndex::Ring { i, j } => {
            let di: [isize; 3] = if i == mesh.n_r { [-2, -1, 0] } else { [-1, 0, 1] };
            let mut out = Vec::with_capacity(8);
            for d in di {
                for dj in [-1isize, 0, 1] {
                    if d == 0 && dj == 0 {
                        continue;
                    }
                    let ii = (i as isize + d) as usize;
                    let k = mesh.node(ii, (j as isize + dj + nt as isize) as usize);
                    out.push((k, [d as f64 * hr, dj as f64 * ht]));
                }
            }
            out
        }
    }
}

/// Vector orthogonal to `x`, `d1`, `d2` in the split form.
fn split_cross(x: &Vector4<f64>, d1: &Vector4<f64>, d2: &Vector4<f64>) -> Vector4<f64> {
    let mut e = Vector4::zeros();
    for k in 0..4 {
        let cols: Vec<usize> = (0..4).filter(|&c| c != k).collect();
        let m = Matrix3::from_fn(|r, c| [x, d1, d2][r][cols[c]]);
        e[k] = if k % 2 == 0 { m.determinant() } else { -m.determinant() };
    }
    Vector4::new(-e[0], e[1], e[2], -e[3])
}

fn degenerate(node: usize, reason: &str) -> GeometryError {
    GeometryError::DegenerateNode { node, reason: reason.into() }
}

/// Patch fit of `values[k] - values[node]` against the stencil offsets;
/// returns rows `(d_a, d_b, d_aa, d_ab, d_bb)` at the node.
///
/// Ring stencils are complete 3x3 blocks and get the biquadratic patch,
/// which interpolates all nine values. The center gets a least-squares
/// quadratic over the first ring.
fn patch_fit<const D: usize>(
    node: usize,
    offsets: &[[f64; 2]],
    deltas: &[[f64; D]],
    biquadratic: bool,
) -> Result<[[f64; D]; 5], GeometryError> {
    let n_terms = if biquadratic { 8 } else { 5 };
    let mut a = DMatrix::zeros(offsets.len(), n_terms);
    let mut rhs = DMatrix::zeros(offsets.len(), D);
    for (row, ([p, q], d)) in offsets.iter().zip(deltas).enumerate() {
        let terms = [*p, *q, 0.5 * p * p, p * q, 0.5 * q * q, p * p * q, p * q * q, p * p * q * q];
        for (c, t) in terms.iter().take(n_terms).enumerate() {
            a[(row, c)] = *t;
        }
        for c in 0..D {
            rhs[(row, c)] = d[c];
        }
    }
    let svd = a.svd(true, true);
    let sv = &svd.singular_values;
    if sv.min() <= 1e-12 * sv.max() {
        return Err(degenerate(node, "rank-deficient patch fit"));
    }
    let coef = svd.solve(&rhs, 0.0).map_err(|e| degenerate(node, e))?;
    Ok(std::array::from_fn(|r| std::array::from_fn(|c| coef[(r, c)])))
}

fn centered(mesh: &DiskMesh, node: usize) -> bool {
    !matches!(mesh.index(node), NodeIndex::Ring { i, .. } if i == mesh.n_r)
}

fn node_forms(surface: &EmbeddedSurface, node: usize) -> Result<NodeForms, GeometryError> {
    match surface.mesh.index(node) {
        NodeIndex::Ring { i, .. } if i >= 2 || on_axis(&surface.points[0]) => global_fit(surface, node),
        _ => ambient_fit(surface, node),
    }
}

/// Fit of the R^{2,2} coordinates; used near the center, where they are O(1).
fn ambient_fit(surface: &EmbeddedSurface, node: usize) -> Result<NodeForms, GeometryError> {
    let mesh = &surface.mesh;
    let x = surface.points[node];
    let st = stencil(mesh, node);
    let offsets: Vec<[f64; 2]> = st.iter().map(|(_, o)| *o).collect();
    let deltas: Vec<[f64; 4]> = st
        .iter()
        .map(|(k, _)| {
            let d = surface.points[*k] - x;
            [d[0], d[1], d[2], d[3]]
        })
        .collect();
    let coef = patch_fit(node, &offsets, &deltas, node != 0)?;
    let col = |r: usize| Vector4::from(coef[r]);
    let (xa, xb) = (col(0), col(1));
    let (xaa, xab, xbb) = (col(2), col(3), col(4));

    let mut nu = split_cross(&x, &xa, &xb);
    let nn = inner(&nu, &nu);
    if !(nn < 0.0) {
        return Err(degenerate(node, "tangent plane is not spacelike"));
    }
    nu /= (-nn).sqrt();
    if inner(&nu, &killing(&x)) > 0.0 {
        nu = -nu;
    }
    let i = Matrix2::new(inner(&xa, &xa), inner(&xa, &xb), inner(&xa, &xb), inner(&xb, &xb));
    let ii = Matrix2::new(inner(&nu, &xaa), inner(&nu, &xab), inner(&nu, &xab), inner(&nu, &xbb));
    let shape = PointForms::from_forms(i, ii).map_err(|_| degenerate(node, "collinear tangents"))?;
    Ok(NodeForms { node, point: x, normal: nu, tangents: [xa, xb], shape, centered: centered(mesh, node) })
}

/// Global coordinates `(r, theta, t)` of a quadric point.
fn global_coords(x: &Vector4<f64>) -> Result<[f64; 3], GeometryError> {
    let p = quadric_to_product(&SpacetimePoint(*x))?;
    Ok([2.0 * p.z.norm().atanh(), p.z.arg(), p.t])
}

/// Points this close to the time axis have no usable polar angle.
const AXIS_RADIUS: f64 = 1e-12;

fn on_axis(x: &Vector4<f64>) -> bool {
    x[1].hypot(x[2]) < AXIS_RADIUS
}

fn unwrap_near(v: f64, reference: f64) -> f64 {
    reference + angle_diff(v, reference)
}

/// Fit in global coordinates, where the metric is
/// `dr^2 + sinh^2 r dtheta^2 - cosh^2 r dt^2`. Only the surface's own
/// variation enters the finite differences; the metric and its Christoffel
/// symbols are exact.
fn global_fit(surface: &EmbeddedSurface, node: usize) -> Result<NodeForms, GeometryError> {
    let mesh = &surface.mesh;
    let x = surface.points[node];
    let y0 = global_coords(&x)?;
    let st = stencil(mesh, node);
    let offsets: Vec<[f64; 2]> = st.iter().map(|(_, o)| *o).collect();
    let deltas = st
        .iter()
        .map(|(k, o)| {
            let y = global_coords(&surface.points[*k])?;
            // on the axis the angle is free; take the stencil slot's angle
            let dth = if on_axis(&surface.points[*k]) { o[1] } else { unwrap_near(y[1], y0[1]) - y0[1] };
            Ok([y[0] - y0[0], dth, unwrap_near(y[2], y0[2]) - y0[2]])
        })
        .collect::<Result<Vec<_>, GeometryError>>()?;
    let [ya, yb, yaa, yab, ybb] = patch_fit(node, &offsets, &deltas, true)?;

    let (s, c) = (y0[0].sinh(), y0[0].cosh());
    let g = [1.0, s * s, -c * c];
    let dot = |u: &[f64; 3], v: &[f64; 3]| (0..3).map(|m| g[m] * u[m] * v[m]).sum::<f64>();
    // covariant second derivative: Y_ab + Gamma(Y_a, Y_b)
    let hess = |u: &[f64; 3], v: &[f64; 3], w: &[f64; 3]| {
        [
            w[0] - s * c * u[1] * v[1] + s * c * u[2] * v[2],
            w[1] + (c / s) * (u[0] * v[1] + u[1] * v[0]),
            w[2] + (s / c) * (u[0] * v[2] + u[2] * v[0]),
        ]
    };
    let omega = [
        ya[1] * yb[2] - ya[2] * yb[1],
        ya[2] * yb[0] - ya[0] * yb[2],
        ya[0] * yb[1] - ya[1] * yb[0],
    ];
    let mut n = [omega[0] / g[0], omega[1] / g[1], omega[2] / g[2]];
    let nn = dot(&n, &n);
    if !(nn < 0.0) {
        return Err(degenerate(node, "tangent plane is not spacelike"));
    }
    let sign = if n[2] > 0.0 { 1.0 } else { -1.0 };
    n.iter_mut().for_each(|v| *v *= sign / (-nn).sqrt());

    let i = Matrix2::new(dot(&ya, &ya), dot(&ya, &yb), dot(&ya, &yb), dot(&yb, &yb));
    let ii = Matrix2::new(
        dot(&n, &hess(&ya, &ya, &yaa)),
        dot(&n, &hess(&ya, &yb, &yab)),
        dot(&n, &hess(&ya, &yb, &yab)),
        dot(&n, &hess(&yb, &yb, &ybb)),
    );
    let shape = PointForms::from_forms(i, ii).map_err(|_| degenerate(node, "collinear tangents"))?;

    // push coordinate vectors forward to R^{2,2}
    let (st_, ct) = y0[2].sin_cos();
    let (sth, cth) = y0[1].sin_cos();
    let dr = Vector4::new(s * ct, c * cth, c * sth, s * st_);
    let dth = Vector4::new(0.0, -s * sth, s * cth, 0.0);
    let dt = Vector4::new(-c * st_, 0.0, 0.0, c * ct);
    let push = |v: &[f64; 3]| dr * v[0] + dth * v[1] + dt * v[2];
    Ok(NodeForms {
        node,
        point: x,
        normal: push(&n),
        tangents: [push(&ya), push(&yb)],
        shape,
        centered: centered(mesh, node),
    })
}

/// First derivatives at `node` of a field sampled on the mesh, in the same
/// parameter basis as [`NodeForms::tangents`] (Cartesian at the center).
pub fn parameter_gradient<const D: usize>(
    mesh: &DiskMesh,
    node: usize,
    values: impl Fn(usize) -> [f64; D],
) -> Result<[[f64; D]; 2], GeometryError> {
    let st = stencil(mesh, node);
    let v0 = values(node);
    let offsets: Vec<[f64; 2]> = st.iter().map(|(_, o)| *o).collect();
    let deltas: Vec<[f64; D]> = st
        .iter()
        .map(|(k, _)| {
            let v = values(*k);
            std::array::from_fn(|c| v[c] - v0[c])
        })
        .collect();
    let [da, db, ..] = patch_fit(node, &offsets, &deltas, node != 0)?;
    Ok([da, db])
}

/// Fits `I` and `II` at every node of an embedded surface.
pub fn compute_forms_embedded(surface: &EmbeddedSurface) -> Result<FundamentalForms, GeometryError> {
    if surface.points.len() != surface.mesh.n_nodes() {
        return Err(GeometryError::InvalidInput("point count does not match mesh".into()));
    }
    let nodes = (0..surface.mesh.n_nodes())
        .map(|n| node_forms(surface, n))
        .collect::<Result<_, _>>()?;
    Ok(FundamentalForms { surface: surface.clone(), nodes })
}

pub fn compute_forms(sol: &SurfaceSolution) -> Result<FundamentalForms, GeometryError> {
    compute_forms_embedded(&EmbeddedSurface::from_solution(sol)?)
}
