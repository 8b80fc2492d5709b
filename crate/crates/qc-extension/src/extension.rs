use ads_core::{Complex64, Matrix2, SpacetimePoint};
use cmc_solver::SurfaceSolution;
use surface_geometry::{parameter_gradient, FundamentalForms, NodeForms, PointForms};

use crate::error::QcError;
use crate::ruling::project_lr;

/// Below this `lambda` the principal frame is not resolved and the first
/// parameter direction is used instead.
const FRAME_LAMBDA_MIN: f64 = 1e-8;

/// `sup |mu|` at or above which the dilatation is flagged near-degenerate.
pub const NEAR_DEGENERATE_K: f64 = 1e6;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeExtension {
    pub node: usize,
    pub pi_l: Complex64,
    pub pi_r: Complex64,
    pub lambda: f64,
    /// `-lambda (H + i) / (1 + H^2)`.
    pub mu_formula: Complex64,
    /// Beltrami coefficient of the discrete `Pi_l` in the principal frame.
    pub mu_measured: Complex64,
    /// Beltrami coefficient of the discrete `Phi = Pi_r o Pi_l^{-1}` at
    /// `pi_l`, in disk coordinates.
    pub mu_phi: Complex64,
    /// `|mu_r - mu_l| / |1 - conj(mu_l) mu_r|` from the formulas for both
    /// projections.
    pub mu_phi_formula: f64,
    /// `(1 + |mu_formula|) / (1 - |mu_formula|)`.
    pub k_local: f64,
    /// Outside the excluded outer rings.
    pub checked: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ExtensionField {
    pub h: f64,
    pub nodes: Vec<NodeExtension>,
}

impl ExtensionField {
    pub fn checked(&self) -> impl Iterator<Item = &NodeExtension> {
        self.nodes.iter().filter(|n| n.checked)
    }

    /// Median and maximum of `|mu_measured - mu_formula| / (1 - |mu_formula|)`
    /// over checked nodes.
    pub fn dilatation_discrepancy(&self) -> (f64, f64) {
        let mut d: Vec<f64> = self
            .checked()
            .map(|n| (n.mu_measured - n.mu_formula).norm() / (1.0 - n.mu_formula.norm()))
            .collect();
        d.sort_by(f64::total_cmp);
        let median = match d.len() {
            0 => f64::NAN,
            m if m % 2 == 1 => d[m / 2],
            m => 0.5 * (d[m / 2 - 1] + d[m / 2]),
        };
        (median, d.last().copied().unwrap_or(f64::NAN))
    }
}

/// Complex dilatation of the real-linear map `d` of `C`, as `f_zbar / f_z`.
pub fn beltrami(d: &Matrix2<f64>) -> Complex64 {
    let fz = Complex64::new(d[(0, 0)] + d[(1, 1)], d[(1, 0)] - d[(0, 1)]);
    let fzb = Complex64::new(d[(0, 0)] - d[(1, 1)], d[(1, 0)] + d[(0, 1)]);
    fzb / fz
}

/// `-lambda (H + i) / (1 + H^2)`, whose squared modulus is `lambda^2 / (1 + H^2)`.
pub fn mu_formula(lambda: f64, h: f64) -> Complex64 {
    -Complex64::new(h, 1.0) * lambda / (1.0 + h * h)
}

/// Beltrami coefficient of `Pi_r` in the same frame: `dPi_r = E - J B`.
fn mu_right_formula(lambda: f64, h: f64) -> Complex64 {
    -Complex64::new(h, -1.0) * lambda / (1.0 + h * h)
}

/// I-orthonormal, positively oriented frame `(e1, J e1)` as matrix columns,
/// with `e1` along the principal direction of the smaller principal
/// curvature `H - lambda`.
pub fn principal_frame(shape: &PointForms) -> Matrix2<f64> {
    let b = &shape.b;
    let (x, y) = if shape.lambda > FRAME_LAMBDA_MIN {
        let k = shape.h - shape.lambda;
        let c1 = (b[(0, 1)], k - b[(0, 0)]);
        let c2 = (k - b[(1, 1)], b[(1, 0)]);
        if c1.0.hypot(c1.1) >= c2.0.hypot(c2.1) {
            c1
        } else {
            c2
        }
    } else {
        (1.0, 0.0)
    };
    let i = &shape.i;
    let n = (i[(0, 0)] * x * x + 2.0 * i[(0, 1)] * x * y + i[(1, 1)] * y * y).sqrt();
    let (x, y) = (x / n, y / n);
    let j = &shape.j;
    Matrix2::new(x, j[(0, 0)] * x + j[(0, 1)] * y, y, j[(1, 0)] * x + j[(1, 1)] * y)
}

/// Derivative of a disk-valued node field in the node's parameter basis,
/// as a real 2x2 matrix with rows `(re, im)`.
fn disk_gradient(forms: &FundamentalForms, node: usize, w: &[Complex64]) -> Result<Matrix2<f64>, QcError> {
    let [da, db] = parameter_gradient(forms.mesh(), node, |k| [w[k].re, w[k].im])?;
    Ok(Matrix2::new(da[0], db[0], da[1], db[1]))
}

/// Triangles of the mesh, counterclockwise in the parameter disk.
fn triangles(forms: &FundamentalForms) -> Vec<[usize; 3]> {
    let mesh = forms.mesh();
    let nt = mesh.n_theta;
    let mut out = Vec::new();
    for j in 0..nt {
        out.push([0, mesh.node(1, j), mesh.node(1, j + 1)]);
    }
    for i in 1..mesh.n_r {
        for j in 0..nt {
            let (a, b) = (mesh.node(i, j), mesh.node(i + 1, j));
            let (c, d) = (mesh.node(i + 1, j + 1), mesh.node(i, j + 1));
            out.push([a, b, c]);
            out.push([a, c, d]);
        }
    }
    out
}

fn signed_area(p: [Complex64; 3]) -> f64 {
    let (u, v) = (p[1] - p[0], p[2] - p[0]);
    0.5 * (u.re * v.im - u.im * v.re)
}

/// Projects every node of `forms` to the base plane and compares the
/// measured dilatation of the left projection with its closed form.
///
/// `sol` supplies the prescribed mean curvature and must be converged on the
/// same mesh as `forms`.
pub fn build_extension(sol: &SurfaceSolution, forms: &FundamentalForms) -> Result<ExtensionField, QcError> {
    if !sol.converged {
        return Err(QcError::InvalidInput("solution did not converge".into()));
    }
    if sol.mesh != *forms.mesh() {
        return Err(QcError::InvalidInput("solution and forms use different meshes".into()));
    }
    let h = sol.h;
    let projected = forms
        .nodes
        .iter()
        .map(|f| project_lr(&SpacetimePoint(f.point), &f.normal))
        .collect::<Result<Vec<_>, _>>()?;
    let pl: Vec<Complex64> = projected.iter().map(|p| p.0).collect();
    let pr: Vec<Complex64> = projected.iter().map(|p| p.1).collect();

    // Rows next to the boundary ring carry one-sided derivatives and are
    // excluded from every comparison, so only fully checked cells count.
    let mut folded: Vec<usize> = triangles(forms)
        .into_iter()
        .filter(|t| t.iter().all(|&k| forms.is_checked(k)))
        .filter(|t| !(signed_area(t.map(|k| pl[k])) > 0.0))
        .flat_map(|t| t.into_iter())
        .collect();
    if !folded.is_empty() {
        folded.sort_unstable();
        folded.dedup();
        return Err(QcError::ProjectionFold { nodes: folded });
    }

    let nodes = forms
        .nodes
        .iter()
        .map(|f| node_extension(forms, f, h, &pl, &pr))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ExtensionField { h, nodes })
}

fn node_extension(
    forms: &FundamentalForms,
    f: &NodeForms,
    h: f64,
    pl: &[Complex64],
    pr: &[Complex64],
) -> Result<NodeExtension, QcError> {
    let node = f.node;
    let dl = disk_gradient(forms, node, pl)?;
    let dr = disk_gradient(forms, node, pr)?;
    let frame = principal_frame(&f.shape);
    let mu_measured = beltrami(&(dl * frame));
    let dl_inv = dl
        .try_inverse()
        .ok_or_else(|| QcError::ProjectionFold { nodes: vec![node] })?;
    let mu_phi = beltrami(&(dr * dl_inv));
    let lambda = f.shape.lambda;
    let mu_l = mu_formula(lambda, h);
    let mu_r = mu_right_formula(lambda, h);
    let mu_phi_formula = (mu_r - mu_l).norm() / (Complex64::new(1.0, 0.0) - mu_l.conj() * mu_r).norm();
    let a = mu_l.norm();
    Ok(NodeExtension {
        node,
        pi_l: pl[node],
        pi_r: pr[node],
        lambda,
        mu_formula: mu_l,
        mu_measured,
        mu_phi,
        mu_phi_formula,
        k_local: (1.0 + a) / (1.0 - a),
        checked: forms.is_checked(node),
    })
}

/// `(1 + s) / (1 - s)` for `s = sup |mu|`.
pub fn quasiconformal_constant(sup_mu: f64) -> Result<f64, QcError> {
    if !(sup_mu >= 0.0 && sup_mu < 1.0) {
        return Err(QcError::NotQuasiconformal { sup_mu });
    }
    Ok((1.0 + sup_mu) / (1.0 - sup_mu))
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DilatationReport {
    /// From `sup |mu_formula|` over checked nodes.
    pub k_formula: f64,
    pub sup_mu_formula: f64,
    /// From `sup |mu_measured|`; infinite if the measured map is not
    /// quasi-conformal.
    pub k_measured: f64,
    pub sup_mu_measured: f64,
    /// Measured dilatation of the extension `Phi` itself.
    pub k_phi: f64,
    pub near_degenerate: bool,
}

pub fn max_dilatation(field: &ExtensionField) -> Result<DilatationReport, QcError> {
    let sup = |g: &dyn Fn(&NodeExtension) -> f64| field.checked().map(g).fold(0.0, f64::max);
    let sup_mu_formula = sup(&|n| n.mu_formula.norm());
    let sup_mu_measured = sup(&|n| n.mu_measured.norm());
    let sup_mu_phi = sup(&|n| n.mu_phi.norm());
    let k_formula = quasiconformal_constant(sup_mu_formula)?;
    let k_measured = quasiconformal_constant(sup_mu_measured).unwrap_or(f64::INFINITY);
    let k_phi = quasiconformal_constant(sup_mu_phi).unwrap_or(f64::INFINITY);
    Ok(DilatationReport {
        k_formula,
        sup_mu_formula,
        k_measured,
        sup_mu_measured,
        k_phi,
        near_degenerate: k_formula >= NEAR_DEGENERATE_K,
    })
}
