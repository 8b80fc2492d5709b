//! Invariant checks run by `validate`, plus the light subset that `solve` and
//! `sweep` record in their manifests.
//!
//! Convergence-type checks compare a leaf with its companion on a mesh of
//! half (or, if that is below the mesh minimum, twice) the resolution.

use ads_core::{in_domain_of_dependence, BoundaryPoint, SpacetimePoint, DEFAULT_TOL_DD};
use cmc_solver::{check_monotone, SurfaceSolution, MIN_N_R, MIN_N_THETA};
use serde::Serialize;
use surface_geometry::{
    beta_residual, compute_forms_embedded, equidistant_operators, normal_flow, FundamentalForms, GeometryError,
    LAMBDA_MIN,
};

use crate::pipeline::{LeafAnalysis, LeafOutcome, Scenario};

pub const GAUSS_TOL: f64 = 1e-10;
pub const DILATATION_MEDIAN_TOL: f64 = 0.05;
pub const LANDSLIDE_STD_TOL: f64 = 1e-3;
/// Flow distance for the equidistant comparison; well inside the focal
/// distance for `|H| <= 4`.
pub const FLOW_RHO: f64 = 0.05;
/// Below this a refinement comparison counts as converged regardless of trend.
pub const REFINEMENT_FLOOR: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    /// Nothing to evaluate, e.g. every node masked on an umbilic surface.
    Skipped,
}

#[derive(Debug, Clone, Serialize)]
pub struct InvariantCheck {
    pub name: &'static str,
    pub status: Status,
    /// Worst observed value over the leaves.
    pub value: Option<f64>,
    pub threshold: Option<f64>,
    pub detail: String,
}

impl InvariantCheck {
    fn new(name: &'static str, threshold: Option<f64>) -> Self {
        Self { name, status: Status::Skipped, value: None, threshold, detail: String::new() }
    }

    fn note(&mut self, msg: String) {
        if !self.detail.is_empty() {
            self.detail.push_str("; ");
        }
        self.detail.push_str(&msg);
    }

    /// Records one leaf's result; the worst value is the largest unless
    /// `smaller_is_worse`.
    fn record(&mut self, ok: bool, value: f64, smaller_is_worse: bool, msg: impl FnOnce() -> String) {
        let worse = match self.value {
            None => true,
            Some(v) if smaller_is_worse => value < v,
            Some(v) => value > v,
        };
        if worse || value.is_nan() {
            self.value = Some(value);
        }
        if !ok {
            self.status = Status::Fail;
            self.note(msg());
        } else if self.status == Status::Skipped {
            self.status = Status::Pass;
        }
    }

    fn fail(&mut self, msg: String) {
        self.status = Status::Fail;
        self.note(msg);
    }

    fn skip(&mut self, msg: String) {
        self.note(msg);
    }
}

pub fn failing(checks: &[InvariantCheck]) -> Vec<String> {
    checks.iter().filter(|c| c.status == Status::Fail).map(|c| c.name.to_string()).collect()
}

fn converged(leaves: &[(f64, LeafOutcome)]) -> impl Iterator<Item = (f64, &SurfaceSolution, &LeafAnalysis)> {
    leaves.iter().filter_map(|(h, l)| match l {
        LeafOutcome::Converged(s, a) => Some((*h, s.as_ref(), a.as_ref())),
        _ => None,
    })
}

pub fn convergence_check(leaves: &[(f64, LeafOutcome)]) -> InvariantCheck {
    let mut c = InvariantCheck::new("convergence", None);
    for (h, l) in leaves {
        let res = l.solution().map_or(f64::NAN, |s| s.residual_norm);
        c.record(l.is_converged(), res, false, || format!("H = {h} did not converge"));
    }
    c
}

pub fn spacelike_check(leaves: &[(f64, LeafOutcome)], eps_sl: f64) -> InvariantCheck {
    let mut c = InvariantCheck::new("spacelike_bound", Some(eps_sl));
    for (h, s, _) in converged(leaves) {
        let m = s.spacelike_margin;
        c.record(m >= eps_sl, m, true, || format!("H = {h}: margin {m:e}"));
    }
    c
}

pub fn gauss_check(leaves: &[(f64, LeafOutcome)]) -> InvariantCheck {
    let mut c = InvariantCheck::new("gauss_identity", Some(GAUSS_TOL));
    for (h, _, a) in converged(leaves) {
        match &a.forms {
            Ok(f) => {
                let e = f.nodes.iter().map(|n| (n.shape.k + 1.0 + n.shape.b.determinant()).abs()).fold(0.0, f64::max);
                c.record(e <= GAUSS_TOL, e, false, || format!("H = {h}: {e:e}"));
            }
            Err(e) => c.fail(format!("H = {h}: {e}")),
        }
    }
    c
}

pub fn curvature_check(leaves: &[(f64, LeafOutcome)]) -> InvariantCheck {
    let mut c = InvariantCheck::new("curvature_bound", Some(0.0));
    for (h, _, a) in converged(leaves) {
        match &a.bounds {
            Some(b) => c.record(b.violations.is_empty() && b.margin > 0.0, b.margin, true, || {
                format!("H = {h}: margin {}, {} violations", b.margin, b.violations.len())
            }),
            None => c.fail(format!("H = {h}: no fundamental forms")),
        }
    }
    c
}

pub fn monotonicity_check(leaves: &[(f64, LeafOutcome)], tol_mono: f64) -> InvariantCheck {
    let mut c = InvariantCheck::new("foliation_monotonicity", Some(tol_mono));
    let sols: Vec<SurfaceSolution> = converged(leaves).map(|(_, s, _)| s.clone()).collect();
    if sols.len() < 2 {
        c.skip("fewer than two converged leaves".into());
        return c;
    }
    let rep = check_monotone(&sols, tol_mono);
    c.record(rep.pass, rep.min_interior_gap, true, || format!("{} violations", rep.violations));
    c
}

fn dilatation_median(a: &LeafAnalysis) -> Option<f64> {
    a.extension.as_ref().ok().map(|x| x.dilatation_discrepancy().0)
}

/// Landslide constancy, dilatation identity and the algebraic
/// `sup |mu|^2 = max lambda^2 / (1 + H^2)` on the main mesh.
fn extension_checks(leaves: &[(f64, LeafOutcome)], coarse: &[(f64, LeafOutcome)], fine: &[(f64, LeafOutcome)]) -> Vec<InvariantCheck> {
    let mut dil = InvariantCheck::new("dilatation_identity", Some(DILATATION_MEDIAN_TOL));
    let mut slide = InvariantCheck::new("landslide_constancy", Some(LANDSLIDE_STD_TOL));
    for (((h, l), (_, lc)), (_, lf)) in leaves.iter().zip(coarse).zip(fine) {
        let LeafOutcome::Converged(_, a) = l else { continue };
        match (&a.dilatation, dilatation_median(a), &a.bounds) {
            (Ok(d), Some(med), Some(b)) => {
                let algebraic = (d.sup_mu_formula.powi(2) - b.max_lambda.powi(2) / (1.0 + h * h)).abs();
                let trend = match (lc, lf) {
                    (LeafOutcome::Converged(_, ac), LeafOutcome::Converged(_, af)) => {
                        match (dilatation_median(ac), dilatation_median(af)) {
                            (Some(mc), Some(mf)) => mf < mc || mf <= REFINEMENT_FLOOR,
                            _ => false,
                        }
                    }
                    _ => false,
                };
                let ok = med <= DILATATION_MEDIAN_TOL && trend && algebraic <= 1e-12 && d.k_formula.is_finite();
                dil.record(ok, med, false, || {
                    format!("H = {h}: median {med:e}, decreasing {trend}, algebraic {algebraic:e}, K {}", d.k_formula)
                });
            }
            (Err(e), ..) => dil.fail(format!("H = {h}: {e}")),
            _ => dil.fail(format!("H = {h}: extension unavailable")),
        }
        match &a.landslide {
            Ok(l) => {
                let s = l.circular_std;
                slide.record(s <= LANDSLIDE_STD_TOL, s, false, || format!("H = {h}: std {s:e}"));
            }
            Err(e) => slide.skip(format!("H = {h}: {e}")),
        }
    }
    vec![dil, slide]
}

fn beta_max(f: &FundamentalForms, h: f64, lambda_min: f64) -> Result<Option<f64>, GeometryError> {
    match beta_residual(f, h, lambda_min) {
        Ok(r) => Ok(Some(r.max_abs)),
        Err(GeometryError::NothingToCheck) => Ok(None),
        Err(e) => Err(e),
    }
}

/// Largest discrepancy of trace and determinant between the flowed surface's
/// fitted shape operator and the algebraic offset of the original.
pub fn flow_discrepancy(f: &FundamentalForms, rho: f64) -> Result<f64, GeometryError> {
    let flowed = compute_forms_embedded(&normal_flow(f, rho)?)?;
    let mut worst: f64 = 0.0;
    for n in f.checked() {
        let (_, b) = equidistant_operators(&n.shape.i, &n.shape.b, rho)?;
        let g = &flowed.nodes[n.node].shape.b;
        worst = worst.max((b.trace() - g.trace()).abs()).max((b.determinant() - g.determinant()).abs());
    }
    Ok(worst)
}

fn refinement_checks(coarse: &[(f64, LeafOutcome)], fine: &[(f64, LeafOutcome)], lambda_min: f64) -> Vec<InvariantCheck> {
    let mut beta = InvariantCheck::new("beta_identity_convergence", None);
    let mut flow = InvariantCheck::new("equidistant_flow_agreement", None);
    for ((h, lc), (_, lf)) in coarse.iter().zip(fine) {
        let forms = |l: &LeafOutcome| match l {
            LeafOutcome::Converged(_, a) => a.forms.as_ref().ok().cloned(),
            _ => None,
        };
        let (Some(fc), Some(ff)) = (forms(lc), forms(lf)) else {
            beta.fail(format!("H = {h}: refinement leaf unavailable"));
            flow.fail(format!("H = {h}: refinement leaf unavailable"));
            continue;
        };
        match (beta_max(&fc, *h, lambda_min), beta_max(&ff, *h, lambda_min)) {
            (Ok(Some(c)), Ok(Some(f))) => {
                beta.record(f < c || f <= REFINEMENT_FLOOR, f, false, || format!("H = {h}: {c:e} -> {f:e}"))
            }
            (Ok(_), Ok(_)) => beta.skip(format!("H = {h}: all nodes masked")),
            (Err(e), _) | (_, Err(e)) => beta.fail(format!("H = {h}: {e}")),
        }
        match (flow_discrepancy(&fc, FLOW_RHO), flow_discrepancy(&ff, FLOW_RHO)) {
            (Ok(c), Ok(f)) => {
                flow.record(f < c || f <= REFINEMENT_FLOOR, f, false, || format!("H = {h}: {c:e} -> {f:e}"))
            }
            (Err(e), _) | (_, Err(e)) => flow.fail(format!("H = {h}: {e}")),
        }
    }
    vec![beta, flow]
}

/// Center and dual-point fixtures for the boundary of the base plane, and
/// membership of every node of every converged leaf in the domain of
/// dependence of the configured curve.
pub fn domain_check(scn: &Scenario, leaves: &[(f64, LeafOutcome)]) -> InvariantCheck {
    let mut c = InvariantCheck::new("domain_of_dependence", None);
    let diagonal: Vec<BoundaryPoint> = (0..4096)
        .map(|k| {
            let a = std::f64::consts::TAU * k as f64 / 4096.0;
            BoundaryPoint::new(a, a)
        })
        .collect();
    let center = in_domain_of_dependence(&SpacetimePoint::origin(), &diagonal, DEFAULT_TOL_DD);
    let dual = in_domain_of_dependence(&SpacetimePoint::new(0.0, 0.0, 0.0, 1.0), &diagonal, DEFAULT_TOL_DD);
    let fixtures = matches!((center, dual), (Ok(true), Ok(false)));
    c.record(fixtures, 0.0, false, || "base-plane fixtures misclassified".into());
    for (h, _, a) in converged(leaves) {
        let Ok(f) = &a.forms else {
            c.fail(format!("H = {h}: no embedded points"));
            continue;
        };
        let outside = f
            .nodes
            .iter()
            .filter(|n| !matches!(scn.curve.contains_in_domain(&SpacetimePoint(n.point)), Ok(true)))
            .count();
        c.record(outside == 0, outside as f64, false, || format!("H = {h}: {outside} nodes outside"));
    }
    c
}

/// Companion resolution for the refinement checks, as `(coarse, fine)`
/// ring counts with the configured mesh being one of them.
pub fn refinement_pair(scn: &Scenario) -> (usize, usize) {
    let m = scn.config.mesh;
    if m.n_r / 2 >= MIN_N_R && m.n_r % 2 == 0 && m.n_theta / 2 >= MIN_N_THETA && m.n_theta % 4 == 0 {
        (m.n_r / 2, m.n_r)
    } else {
        (m.n_r, 2 * m.n_r)
    }
}

/// The full suite. `leaves` are the solves on the configured mesh; `other`
/// are the same H values on the companion mesh from [`refinement_pair`].
pub fn full_suite(
    scn: &Scenario,
    leaves: &[(f64, LeafOutcome)],
    other: &[(f64, LeafOutcome)],
) -> Vec<InvariantCheck> {
    let (coarse_n, _) = refinement_pair(scn);
    let (coarse, fine) = if coarse_n == scn.config.mesh.n_r { (leaves, other) } else { (other, leaves) };
    let h_coarse = scn.config.mesh.r_max / coarse_n as f64;
    let lambda_min = LAMBDA_MIN.max(h_coarse * h_coarse);
    let mut checks = vec![
        convergence_check(leaves),
        spacelike_check(leaves, scn.config.tolerances.eps_sl),
        gauss_check(leaves),
        curvature_check(leaves),
    ];
    checks.extend(refinement_checks(coarse, fine, lambda_min));
    checks.extend(extension_checks(leaves, coarse, fine));
    checks.push(domain_check(scn, leaves));
    let mut companion = convergence_check(other);
    companion.name = "refinement_convergence";
    checks.push(companion);
    checks
}
