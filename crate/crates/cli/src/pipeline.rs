use boundary_data::{make_quasicircle, QuasiCircle, DEFAULT_N_SAMPLES};
use cmc_solver::{build_mesh, dirichlet_data, solve, DiskMesh, SolverError, SurfaceSolution};
use qc_extension::{build_extension, landslide_angle, max_dilatation, DilatationReport, ExtensionField, Landslide};
use serde::Serialize;
use surface_geometry::{compute_forms, principal_bounds_check, BoundsReport, FundamentalForms};

use crate::config::ScenarioConfig;
use crate::error::CliError;
use crate::io::{Cell, CsvTable};

/// Configuration turned into solver inputs.
pub struct Scenario {
    pub config: ScenarioConfig,
    pub curve: QuasiCircle,
    pub mesh: DiskMesh,
}

impl Scenario {
    pub fn new(config: ScenarioConfig) -> Result<Self, CliError> {
        config.validate()?;
        let map = config.boundary.build()?;
        let curve = make_quasicircle(&map, DEFAULT_N_SAMPLES).map_err(|e| CliError::Config(format!("boundary: {e}")))?;
        let m = config.mesh;
        let mesh = build_mesh(m.r_max, m.n_r, m.n_theta).map_err(|e| CliError::Config(format!("mesh: {e}")))?;
        Ok(Self { config, curve, mesh })
    }

    /// Same boundary on a mesh with `n_r` rings and `2 n_r` sectors.
    pub fn with_rings(&self, n_r: usize) -> Result<Self, CliError> {
        let mut config = self.config.clone();
        config.mesh.n_r = n_r;
        config.mesh.n_theta = self.config.mesh.n_theta * n_r / self.config.mesh.n_r;
        Self::new(config)
    }

    pub fn boundary_data(&self, h: f64) -> Vec<f64> {
        dirichlet_data(&self.curve, &self.mesh, h, self.config.truncation.into())
    }

    pub fn solve(&self, h: f64, init: Option<&[f64]>) -> Result<SurfaceSolution, SolverError> {
        solve(&self.mesh, &self.boundary_data(h), h, init, &self.config.solver_options())
    }
}

/// Geometry derived from a converged leaf. Each stage records its own
/// failure instead of aborting the others.
pub struct LeafAnalysis {
    pub forms: Result<FundamentalForms, String>,
    pub bounds: Option<BoundsReport>,
    pub extension: Result<ExtensionField, String>,
    pub dilatation: Result<DilatationReport, String>,
    pub landslide: Result<Landslide, String>,
}

pub fn analyze(sol: &SurfaceSolution) -> LeafAnalysis {
    let forms = compute_forms(sol).map_err(|e| e.to_string());
    let Ok(f) = &forms else {
        let msg = "fundamental forms unavailable".to_string();
        return LeafAnalysis {
            bounds: None,
            extension: Err(msg.clone()),
            dilatation: Err(msg.clone()),
            landslide: Err(msg),
            forms,
        };
    };
    let bounds = Some(principal_bounds_check(f, sol.h));
    let extension = build_extension(sol, f).map_err(|e| e.to_string());
    let dilatation = match &extension {
        Ok(x) => max_dilatation(x).map_err(|e| e.to_string()),
        Err(e) => Err(e.clone()),
    };
    let landslide = landslide_angle(f, sol.h).map(|(l, _)| l).map_err(|e| e.to_string());
    LeafAnalysis { forms, bounds, extension, dilatation, landslide }
}

/// How a requested leaf terminated.
pub enum LeafOutcome {
    Converged(Box<SurfaceSolution>, Box<LeafAnalysis>),
    /// Newton stalled; the best iterate is kept.
    Stalled(Box<SurfaceSolution>, String),
    Failed(String),
}

impl LeafOutcome {
    pub fn from_result(res: Result<SurfaceSolution, SolverError>) -> Self {
        match res {
            Ok(sol) => {
                let a = analyze(&sol);
                LeafOutcome::Converged(Box::new(sol), Box::new(a))
            }
            Err(SolverError::LeafFailed { source, .. }) => Self::from_result(Err(*source)),
            Err(SolverError::NoConvergence { iterations, residual, reason, best }) => LeafOutcome::Stalled(
                best,
                format!("Newton stalled after {iterations} iterations with residual {residual:e}: {reason}"),
            ),
            Err(e) => LeafOutcome::Failed(e.to_string()),
        }
    }

    pub fn solution(&self) -> Option<&SurfaceSolution> {
        match self {
            LeafOutcome::Converged(s, _) | LeafOutcome::Stalled(s, _) => Some(s),
            LeafOutcome::Failed(_) => None,
        }
    }

    pub fn is_converged(&self) -> bool {
        matches!(self, LeafOutcome::Converged(..))
    }
}

/// Per-leaf manifest entry. Quantities that could not be computed are null.
#[derive(Debug, Clone, Serialize)]
pub struct LeafSummary {
    #[serde(rename = "H")]
    pub h: f64,
    pub status: &'static str,
    pub error: Option<String>,
    pub file: Option<String>,
    pub iterations: Option<usize>,
    pub residual_norm: Option<f64>,
    pub spacelike_margin: Option<f64>,
    pub max_lambda: Option<f64>,
    #[serde(rename = "min_K")]
    pub min_k: Option<f64>,
    pub curvature_margin: Option<f64>,
    pub sup_mu: Option<f64>,
    #[serde(rename = "K_dilatation")]
    pub k_dilatation: Option<f64>,
    pub sup_mu_measured: Option<f64>,
    pub dilatation_median: Option<f64>,
    pub theta_est: Option<f64>,
    pub theta_expected: Option<f64>,
    pub landslide_circular_std: Option<f64>,
    pub analysis_errors: Vec<String>,
}

impl LeafSummary {
    pub fn new(h: f64, outcome: &LeafOutcome, file: Option<String>) -> Self {
        let mut s = LeafSummary {
            h,
            status: "failed",
            error: None,
            file,
            iterations: None,
            residual_norm: None,
            spacelike_margin: None,
            max_lambda: None,
            min_k: None,
            curvature_margin: None,
            sup_mu: None,
            k_dilatation: None,
            sup_mu_measured: None,
            dilatation_median: None,
            theta_est: None,
            theta_expected: None,
            landslide_circular_std: None,
            analysis_errors: Vec::new(),
        };
        if let Some(sol) = outcome.solution() {
            s.iterations = Some(sol.iterations);
            s.residual_norm = Some(sol.residual_norm);
            s.spacelike_margin = Some(sol.spacelike_margin);
        }
        match outcome {
            LeafOutcome::Failed(e) => s.error = Some(e.clone()),
            LeafOutcome::Stalled(_, e) => {
                s.status = "no_convergence";
                s.error = Some(e.clone());
            }
            LeafOutcome::Converged(_, a) => {
                s.status = "converged";
                s.fill(a);
            }
        }
        s
    }

    fn fill(&mut self, a: &LeafAnalysis) {
        let errs = &mut self.analysis_errors;
        match &a.forms {
            Ok(f) => self.min_k = Some(f.checked().map(|n| n.shape.k).fold(f64::INFINITY, f64::min)),
            Err(e) => errs.push(format!("forms: {e}")),
        }
        if let Some(b) = &a.bounds {
            self.max_lambda = Some(b.max_lambda);
            self.curvature_margin = Some(b.margin);
        }
        match &a.extension {
            Ok(x) => self.dilatation_median = Some(x.dilatation_discrepancy().0),
            Err(e) => errs.push(format!("extension: {e}")),
        }
        match &a.dilatation {
            Ok(d) => {
                self.sup_mu = Some(d.sup_mu_formula);
                self.k_dilatation = Some(d.k_formula);
                self.sup_mu_measured = Some(d.sup_mu_measured);
            }
            Err(e) if a.extension.is_ok() => errs.push(format!("dilatation: {e}")),
            Err(_) => {}
        }
        match &a.landslide {
            Ok(l) => {
                self.theta_est = Some(l.theta_est);
                self.theta_expected = Some(l.expected);
                self.landslide_circular_std = Some(l.circular_std);
            }
            Err(e) => errs.push(format!("landslide: {e}")),
        }
    }
}

pub const SURFACE_COLUMNS: [&str; 16] = [
    "node",
    "z_re",
    "z_im",
    "u",
    "v",
    "lambda",
    "K",
    "mu_formula_re",
    "mu_formula_im",
    "mu_measured_re",
    "mu_measured_im",
    "pi_l_re",
    "pi_l_im",
    "pi_r_re",
    "pi_r_im",
    "checked",
];

/// One row per node. Geometry columns are `NaN` where the analysis did not
/// produce them (stalled leaves, failed extensions).
pub fn surface_csv(sol: &SurfaceSolution, analysis: Option<&LeafAnalysis>) -> Vec<u8> {
    let mesh = &sol.mesh;
    let mut t = CsvTable::new(&SURFACE_COLUMNS);
    let forms = analysis.and_then(|a| a.forms.as_ref().ok());
    let ext = analysis.and_then(|a| a.extension.as_ref().ok());
    for n in 0..mesh.n_nodes() {
        let z = mesh.z(n);
        let shape = forms.map(|f| &f.nodes[n].shape);
        let x = ext.map(|e| &e.nodes[n]);
        let nan = f64::NAN;
        let c = |v: Option<f64>| Cell::Float(v.unwrap_or(nan));
        t.row(&[
            Cell::Int(n),
            z.re.into(),
            z.im.into(),
            sol.u[n].into(),
            sol.v[n].into(),
            c(shape.map(|s| s.lambda)),
            c(shape.map(|s| s.k)),
            c(x.map(|x| x.mu_formula.re)),
            c(x.map(|x| x.mu_formula.im)),
            c(x.map(|x| x.mu_measured.re)),
            c(x.map(|x| x.mu_measured.im)),
            c(x.map(|x| x.pi_l.re)),
            c(x.map(|x| x.pi_l.im)),
            c(x.map(|x| x.pi_r.re)),
            c(x.map(|x| x.pi_r.im)),
            Cell::Bool(forms.is_some_and(|f| f.is_checked(n))),
        ]);
    }
    t.into_bytes()
}

/// Node-by-H matrix of heights. Columns of leaves without a solution are `NaN`.
pub fn foliation_csv(mesh: &DiskMesh, leaves: &[(f64, LeafOutcome)]) -> Vec<u8> {
    let mut cols: Vec<String> = ["node", "r", "theta", "z_re", "z_im"].map(String::from).to_vec();
    cols.extend(leaves.iter().map(|(h, _)| format!("u_H={h}")));
    let mut t = CsvTable::new(&cols);
    for n in 0..mesh.n_nodes() {
        let (r, th) = mesh.polar(n);
        let z = mesh.z(n);
        let mut row = vec![Cell::Int(n), r.into(), th.into(), z.re.into(), z.im.into()];
        row.extend(leaves.iter().map(|(_, l)| Cell::Float(l.solution().map_or(f64::NAN, |s| s.u[n]))));
        t.row(&row);
    }
    t.into_bytes()
}

/// Samples `phi(theta)` of the boundary map, lifted, with the curve
/// coordinates `alpha = (theta + phi) / 2`, `tau = (phi - theta) / 2`.
pub fn boundary_csv(curve: &QuasiCircle) -> Vec<u8> {
    let mut t = CsvTable::new(&["sample", "theta", "phi", "alpha", "tau"]);
    for (k, (&alpha, &tau)) in curve.alpha.iter().zip(&curve.tau).enumerate() {
        t.row(&[Cell::Int(k), (alpha - tau).into(), (alpha + tau).into(), alpha.into(), tau.into()]);
    }
    t.into_bytes()
}
