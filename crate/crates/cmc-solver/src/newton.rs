use faer::prelude::*;
use faer::sparse::{SparseColMat, Triplet};
use faer::Mat;

use crate::bc::harmonic_extension;
use crate::error::SolverError;
use crate::mesh::{DiskMesh, NodeIndex};
use crate::stencil::Discretization;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JacobianKind {
    Analytic,
    /// One-sided differences restricted to each node's stencil support.
    FiniteDifference,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Stop once the max-norm of the residual is at most this.
    pub tol_newton: f64,
    pub max_iter: usize,
    /// Smallest admissible `1 - cosh^2 r |grad u|^2` on any face.
    pub eps_sl: f64,
    pub jacobian: JacobianKind,
    /// Armijo sufficient-decrease constant.
    pub armijo: f64,
    /// Backtracking gives up below this step length.
    pub min_step: f64,
    /// Keep every accepted iterate in the returned solution.
    pub keep_iterates: bool,
}

impl Default for SolverOptions {
    fn default() -> Self {
        Self {
            tol_newton: 1e-10,
            max_iter: 50,
            eps_sl: 1e-6,
            jacobian: JacobianKind::Analytic,
            armijo: 1e-4,
            min_step: 1.0 / (1u32 << 20) as f64,
            keep_iterates: false,
        }
    }
}

/// A graph `t = u(z)` over the mesh together with solve diagnostics.
#[derive(Debug, Clone, PartialEq)]
pub struct SurfaceSolution {
    pub mesh: DiskMesh,
    /// Prescribed mean curvature.
    pub h: f64,
    /// Heights at every node, boundary ring included.
    pub u: Vec<f64>,
    /// Node values of `(1 - cosh^2 r |grad u|^2)^(-1/2)`; NaN where not spacelike.
    pub v: Vec<f64>,
    /// Max-norm of the discrete residual at interior nodes.
    pub residual_norm: f64,
    /// Minimum over nodes of `1 - cosh^2 r |grad u|^2`.
    pub spacelike_margin: f64,
    /// Residual evaluations at accepted iterates, the final check included.
    pub iterations: usize,
    pub converged: bool,
    pub residual_history: Vec<f64>,
    pub iterates: Vec<Vec<f64>>,
}

/// Hyperbolic `|grad u|^2` at each node from centered differences
/// (one-sided second order on the boundary ring, least squares at the center).
pub fn gradient_norm_sq(mesh: &DiskMesh, u: &[f64]) -> Vec<f64> {
    let h = mesh.h_r();
    let ht = mesh.h_theta();
    let nt = mesh.n_theta;
    (0..mesh.n_nodes())
        .map(|node| match mesh.index(node) {
            NodeIndex::Center => {
                let (mut gx, mut gy) = (0.0, 0.0);
                for j in 0..nt {
                    let d = u[mesh.node(1, j)] - u[0];
                    let th = mesh.sector_angle(j);
                    gx += d * th.cos();
                    gy += d * th.sin();
                }
                let s = 2.0 / (nt as f64 * h);
                (gx * s).powi(2) + (gy * s).powi(2)
            }
            NodeIndex::Ring { i, j } => {
                let ur = if i == mesh.n_r {
                    (3.0 * u[node] - 4.0 * u[mesh.node(i - 1, j)] + u[mesh.node(i - 2, j)]) / (2.0 * h)
                } else {
                    (u[mesh.node(i + 1, j)] - u[mesh.node(i - 1, j)]) / (2.0 * h)
                };
                let ut = (u[mesh.node(i, j + 1)] - u[mesh.node(i, j + nt - 1)]) / (2.0 * ht);
                let s = mesh.ring_radius(i).sinh();
                ur * ur + ut * ut / (s * s)
            }
        })
        .collect()
}

fn max_norm(r: &[f64]) -> f64 {
    r.iter().fold(0.0f64, |m, x| m.max(x.abs()))
}

fn two_norm(r: &[f64]) -> f64 {
    r.iter().map(|x| x * x).sum::<f64>().sqrt()
}

impl SurfaceSolution {
    /// Assembles diagnostics for given node heights; `residual_norm` is NaN if
    /// the discrete operator cannot be evaluated.
    pub fn from_heights(mesh: &DiskMesh, h: f64, u: Vec<f64>) -> Self {
        let disc = Discretization::new(mesh);
        let residual_norm = disc.residual(&u, h, 0.0).map(|r| max_norm(&r)).unwrap_or(f64::NAN);
        Self::assemble(mesh, h, u, residual_norm, 0, false, Vec::new(), Vec::new())
    }

    #[allow(clippy::too_many_arguments)]
    fn assemble(
        mesh: &DiskMesh,
        h: f64,
        u: Vec<f64>,
        residual_norm: f64,
        iterations: usize,
        converged: bool,
        residual_history: Vec<f64>,
        iterates: Vec<Vec<f64>>,
    ) -> Self {
        let g2 = gradient_norm_sq(mesh, &u);
        let mut margin = f64::INFINITY;
        let v = g2
            .iter()
            .enumerate()
            .map(|(node, g)| {
                let chi = mesh.chi(node);
                let q = 1.0 - chi * chi * g;
                margin = margin.min(q);
                if q > 0.0 {
                    q.powf(-0.5)
                } else {
                    f64::NAN
                }
            })
            .collect();
        Self {
            mesh: *mesh,
            h,
            u,
            v,
            residual_norm,
            spacelike_margin: margin,
            iterations,
            converged,
            residual_history,
            iterates,
        }
    }
}

const FD_STEP: f64 = 3e-7;

fn jacobian_triplets(
    disc: &Discretization,
    u: &[f64],
    kind: JacobianKind,
    eps_sl: f64,
) -> Result<Vec<Triplet<usize, usize, f64>>, SolverError> {
    let n_int = disc.mesh.n_interior();
    let mut trips = Vec::with_capacity(16 * n_int);
    match kind {
        JacobianKind::Analytic => {
            for face in &disc.faces {
                let fe = face.eval(u, eps_sl)?;
                for &(row, w) in face.rows() {
                    for (k, c) in face.a.iter().filter(|(k, _)| *k < n_int) {
                        trips.push(Triplet::new(row, k, w * fe.da * c));
                    }
                    for (k, c) in face.b.iter().filter(|(k, _)| *k < n_int) {
                        trips.push(Triplet::new(row, k, w * fe.db * c));
                    }
                }
            }
        }
        JacobianKind::FiniteDifference => {
            let base = disc
                .faces
                .iter()
                .map(|f| f.eval(u, eps_sl).map(|e| e.flux))
                .collect::<Result<Vec<_>, _>>()?;
            // second-order one-sided differences: (-3 f0 + 4 f1 - f2) / (2 delta)
            let mut u1 = u.to_vec();
            let mut u2 = u.to_vec();
            for k in 0..n_int {
                let delta = FD_STEP * u[k].abs().max(1.0);
                u1[k] = u[k] + delta;
                u2[k] = u[k] + 2.0 * delta;
                for &f in &disc.faces_of_node[k] {
                    let face = &disc.faces[f];
                    let f1 = face.eval(&u1, 0.0)?.flux;
                    let f2 = face.eval(&u2, 0.0)?.flux;
                    let df = (4.0 * f1 - f2 - 3.0 * base[f]) / (2.0 * delta);
                    for &(row, w) in face.rows() {
                        trips.push(Triplet::new(row, k, w * df));
                    }
                }
                u1[k] = u[k];
                u2[k] = u[k];
            }
        }
    }
    Ok(trips)
}

fn newton_step(
    disc: &Discretization,
    u: &[f64],
    res: &[f64],
    opts: &SolverOptions,
) -> Result<Vec<f64>, SolverError> {
    let n = disc.mesh.n_interior();
    let trips = jacobian_triplets(disc, u, opts.jacobian, opts.eps_sl)?;
    let jac = SparseColMat::<usize, f64>::try_new_from_triplets(n, n, &trips)
        .map_err(|e| SolverError::LinearSolve(format!("{e:?}")))?;
    let lu = jac.sp_lu().map_err(|e| SolverError::LinearSolve(format!("{e:?}")))?;
    let rhs = Mat::<f64>::from_fn(n, 1, |i, _| -res[i]);
    let x = lu.solve(&rhs);
    let step: Vec<f64> = (0..n).map(|i| x[(i, 0)]).collect();
    if step.iter().any(|s| !s.is_finite()) {
        return Err(SolverError::LinearSolve("singular Jacobian".into()));
    }
    Ok(step)
}

/// Solves the prescribed mean curvature equation with Dirichlet data
/// `boundary` on the outer ring (one value per sector).
///
/// `init` supplies all node heights. If its boundary entries differ from
/// `boundary`, the harmonic extension of the difference is added. Without it the solve starts from the harmonic extension of `boundary`,
/// which is `u = 0` for zero data. A zero interior under nonzero data is not
/// spacelike next to the boundary ring.
pub fn solve(
    mesh: &DiskMesh,
    boundary: &[f64],
    h: f64,
    init: Option<&[f64]>,
    opts: &SolverOptions,
) -> Result<SurfaceSolution, SolverError> {
    if boundary.len() != mesh.n_theta {
        return Err(SolverError::InvalidInput(format!(
            "expected {} boundary values, got {}",
            mesh.n_theta,
            boundary.len()
        )));
    }
    if opts.max_iter == 0 {
        return Err(SolverError::InvalidInput("max_iter must be positive".into()));
    }
    if !h.is_finite() || boundary.iter().any(|b| !b.is_finite()) {
        return Err(SolverError::InvalidInput("non-finite H or boundary data".into()));
    }
    let n_int = mesh.n_interior();
    let mut u = match init {
        Some(v) if v.len() == mesh.n_nodes() => v.to_vec(),
        Some(v) => {
            return Err(SolverError::InvalidInput(format!(
                "initial guess has {} entries, mesh has {} nodes",
                v.len(),
                mesh.n_nodes()
            )))
        }
        None => harmonic_extension(mesh, boundary),
    };
    if u[n_int..] != *boundary {
        let diff: Vec<f64> = boundary.iter().zip(&u[n_int..]).map(|(b, v)| b - v).collect();
        for (x, d) in u.iter_mut().zip(harmonic_extension(mesh, &diff)) {
            *x += d;
        }
    }
    u[n_int..].copy_from_slice(boundary);
    let disc = Discretization::new(mesh);
    let mut res = disc.residual(&u, h, opts.eps_sl)?;
    let mut history = Vec::new();
    let mut iterates = Vec::new();

    let stalled = |u: Vec<f64>, history: Vec<f64>, iterates, reason: String| {
        let r = *history.last().unwrap_or(&f64::NAN);
        let it = history.len();
        SolverError::NoConvergence {
            iterations: it,
            residual: r,
            reason,
            best: Box::new(SurfaceSolution::assemble(mesh, h, u, r, it, false, history, iterates)),
        }
    };

    for k in 1..=opts.max_iter {
        let rn = max_norm(&res);
        history.push(rn);
        if opts.keep_iterates {
            iterates.push(u.clone());
        }
        if rn <= opts.tol_newton {
            let it = history.len();
            return Ok(SurfaceSolution::assemble(mesh, h, u, rn, it, true, history, iterates));
        }
        if k == opts.max_iter {
            break;
        }
        let step = match newton_step(&disc, &u, &res, opts) {
            Ok(s) => s,
            Err(e) => return Err(stalled(u, history, iterates, e.to_string())),
        };
        let phi0 = two_norm(&res);
        let mut t = 1.0;
        let mut trial = u.clone();
        loop {
            for (x, (u0, s)) in trial[..n_int].iter_mut().zip(u.iter().zip(&step)) {
                *x = u0 + t * s;
            }
            if let Ok(r) = disc.residual(&trial, h, opts.eps_sl) {
                if two_norm(&r) <= (1.0 - opts.armijo * t) * phi0 {
                    res = r;
                    break;
                }
            }
            t *= 0.5;
            if t < opts.min_step {
                // No descent left. Within a decade of the tolerance and at
                // the cancellation floor, the residual is pure rounding.
                if rn <= 10.0 * opts.tol_newton && rn <= disc.rounding_floor(&u, h, opts.eps_sl) {
                    let it = history.len();
                    return Ok(SurfaceSolution::assemble(mesh, h, u, rn, it, true, history, iterates));
                }
                return Err(stalled(u, history, iterates, "line search failed".into()));
            }
        }
        u = trial;
    }
    Err(stalled(u, history, iterates, "iteration limit reached".into()))
}

/// Discrete residual at interior nodes, for diagnostics.
pub fn residual(mesh: &DiskMesh, u: &[f64], h: f64) -> Result<Vec<f64>, SolverError> {
    if u.len() != mesh.n_nodes() {
        return Err(SolverError::InvalidInput("height vector does not match mesh".into()));
    }
    Discretization::new(mesh).residual(u, h, 0.0)
}
