use ads_core::{inner, Vector4};
use cmc_solver::NodeIndex;
use nalgebra::Matrix2;

use crate::algebra::PointForms;
use crate::error::GeometryError;
use crate::fit::FundamentalForms;

/// Outcome of the principal-curvature bound `lambda <= sqrt(1 + H^2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundsReport {
    pub max_lambda: f64,
    /// `sqrt(1 + H^2) - max_lambda`.
    pub margin: f64,
    pub tol_bound: f64,
    /// Nodes with `lambda > sqrt(1 + H^2) + tol_bound`.
    pub violations: Vec<usize>,
    /// Largest Gauss curvature over checked nodes.
    pub max_k: f64,
    pub checked: usize,
}

/// Bound check on an explicit list of `(node, forms)` pairs.
pub fn principal_bounds<'a>(
    shapes: impl IntoIterator<Item = (usize, &'a PointForms)>,
    h: f64,
    tol_bound: f64,
) -> BoundsReport {
    let cap = (1.0 + h * h).sqrt();
    let mut rep = BoundsReport {
        max_lambda: 0.0,
        margin: cap,
        tol_bound,
        violations: Vec::new(),
        max_k: f64::NEG_INFINITY,
        checked: 0,
    };
    for (node, s) in shapes {
        rep.checked += 1;
        rep.max_lambda = rep.max_lambda.max(s.lambda);
        rep.max_k = rep.max_k.max(s.k);
        if s.lambda > cap + tol_bound {
            rep.violations.push(node);
        }
    }
    rep.margin = cap - rep.max_lambda;
    rep
}

/// Bound check over nodes inside the two outermost rings, with
/// `tol_bound = 10 h_r^2`.
pub fn principal_bounds_check(forms: &FundamentalForms, h: f64) -> BoundsReport {
    let hr = forms.mesh().h_r();
    principal_bounds(forms.checked().map(|f| (f.node, &f.shape)), h, 10.0 * hr * hr)
}

pub const LAMBDA_MIN: f64 = 1e-4;

/// Nodes closer than this to the axis are not evaluated. Any polar-stencil fit
/// leaves an `O(h^2)` error with angular dependence that persists at `r -> 0`,
/// and its Laplacian is `O(h^2 / r^2)`, which is `O(1)` at a fixed ring index.
pub const BETA_CORE_RADIUS: f64 = 0.5;

#[derive(Debug, Clone, PartialEq)]
pub struct BetaResidual {
    /// `Delta beta - 2 (e^{2 beta} - H^2 - 1)` per node; NaN where masked.
    pub values: Vec<f64>,
    pub evaluated: usize,
    pub max_abs: f64,
}

fn metric(xr: &Vector4<f64>, xt: &Vector4<f64>) -> (f64, Matrix2<f64>) {
    let g = Matrix2::new(inner(xr, xr), inner(xr, xt), inner(xr, xt), inner(xt, xt));
    let det = g.determinant();
    let inv = Matrix2::new(g[(1, 1)], -g[(0, 1)], -g[(0, 1)], g[(0, 0)]) / det;
    (det.sqrt(), inv)
}

/// Residual of `Delta beta = 2 K = 2 (e^{2 beta} - H^2 - 1)` with the Laplace-Beltrami
/// operator of the induced metric, discretized in the mesh's `(r, theta)`
/// parameters. Evaluated at ring nodes `2..=n_r-2` outside [`BETA_CORE_RADIUS`]
/// whose 3x3 neighborhood has `lambda >= lambda_min`.
pub fn beta_residual(forms: &FundamentalForms, h: f64, lambda_min: f64) -> Result<BetaResidual, GeometryError> {
    let beta: Vec<f64> = forms.nodes.iter().map(|f| f.shape.beta).collect();
    let lam: Vec<f64> = forms.nodes.iter().map(|f| f.shape.lambda).collect();
    beta_residual_fields(forms, &beta, &lam, h, lambda_min)
}

/// As [`beta_residual`] with an explicit `beta` field and mask field.
pub fn beta_residual_fields(
    forms: &FundamentalForms,
    beta: &[f64],
    lambda: &[f64],
    h: f64,
    lambda_min: f64,
) -> Result<BetaResidual, GeometryError> {
    let mesh = forms.mesh();
    let x = &forms.surface.points;
    let (hr, ht, nt) = (mesh.h_r(), mesh.h_theta(), mesh.n_theta);
    let p = |i: usize, j: usize| x[mesh.node(i, j)];
    let b = |i: usize, j: usize| beta[mesh.node(i, j)];
    let flux_r = |i: usize, j: usize| {
        // face between rings i and i + 1
        let xr = (p(i + 1, j) - p(i, j)) / hr;
        let xt = (p(i + 1, j + 1) - p(i + 1, j + nt - 1) + p(i, j + 1) - p(i, j + nt - 1)) / (4.0 * ht);
        let br = (b(i + 1, j) - b(i, j)) / hr;
        let bt = (b(i + 1, j + 1) - b(i + 1, j + nt - 1) + b(i, j + 1) - b(i, j + nt - 1)) / (4.0 * ht);
        let (sg, gi) = metric(&xr, &xt);
        sg * (gi[(0, 0)] * br + gi[(0, 1)] * bt)
    };
    let flux_t = |i: usize, j: usize| {
        // face between sectors j and j + 1
        let xt = (p(i, j + 1) - p(i, j)) / ht;
        let xr = (p(i + 1, j) - p(i - 1, j) + p(i + 1, j + 1) - p(i - 1, j + 1)) / (4.0 * hr);
        let bt = (b(i, j + 1) - b(i, j)) / ht;
        let br = (b(i + 1, j) - b(i - 1, j) + b(i + 1, j + 1) - b(i - 1, j + 1)) / (4.0 * hr);
        let (sg, gi) = metric(&xr, &xt);
        sg * (gi[(1, 0)] * br + gi[(1, 1)] * bt)
    };
    let mut values = vec![f64::NAN; mesh.n_nodes()];
    let mut evaluated = 0;
    let mut max_abs: f64 = 0.0;
    for (node, val) in values.iter_mut().enumerate() {
        let NodeIndex::Ring { i, j } = mesh.index(node) else { continue };
        if i < 2 || i + 2 > mesh.n_r || mesh.ring_radius(i) < BETA_CORE_RADIUS {
            continue;
        }
        let ok = (i - 1..=i + 1).all(|ii| {
            [nt - 1, 0, 1].iter().all(|&dj| {
                let k = mesh.node(ii, j + dj);
                lambda[k] >= lambda_min && beta[k].is_finite()
            })
        });
        if !ok {
            continue;
        }
        let xr = (p(i + 1, j) - p(i - 1, j)) / (2.0 * hr);
        let xt = (p(i, j + 1) - p(i, j + nt - 1)) / (2.0 * ht);
        let (sg, _) = metric(&xr, &xt);
        let div = (flux_r(i, j) - flux_r(i - 1, j)) / hr + (flux_t(i, j) - flux_t(i, j + nt - 1)) / ht;
        let r = div / sg - 2.0 * ((2.0 * b(i, j)).exp() - h * h - 1.0);
        *val = r;
        evaluated += 1;
        max_abs = max_abs.max(r.abs());
    }
    if evaluated == 0 {
        return Err(GeometryError::NothingToCheck);
    }
    Ok(BetaResidual { values, evaluated, max_abs })
}
