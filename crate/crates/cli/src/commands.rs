use std::path::Path;

use boundary_data::qs_norm_estimate_seeded;
use cmc_solver::{check_monotone, SurfaceSolution};
use serde::Serialize;

use crate::config::ScenarioConfig;
use crate::error::CliError;
use crate::io::{write_atomic, Artifact, SCHEMA_VERSION};
use crate::pipeline::{boundary_csv, foliation_csv, surface_csv, LeafOutcome, LeafSummary, Scenario};
use crate::validate::{self, failing, InvariantCheck};

/// Quadruples scanned for the boundary norm recorded in every manifest.
pub const QS_NORM_QUADRUPLES: usize = 4096;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Command {
    Solve,
    Sweep,
    Validate,
    Export,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Solve => "solve",
            Command::Sweep => "sweep",
            Command::Validate => "validate",
            Command::Export => "export",
        }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct BoundarySummary {
    pub qs_norm: f64,
    pub qs_norm_quadruples: usize,
    pub qs_norm_l_max: f64,
    pub acausal_margin: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct MonotonicitySummary {
    pub leaves_compared: usize,
    pub min_interior_gap: f64,
    pub min_boundary_gap: f64,
    pub violations: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct Manifest {
    pub schema_version: u32,
    pub command: &'static str,
    pub config: ScenarioConfig,
    pub boundary: BoundarySummary,
    /// True when every requested leaf converged.
    pub complete: bool,
    pub leaves: Vec<LeafSummary>,
    pub monotonicity: Option<MonotonicitySummary>,
    pub invariants: Vec<InvariantCheck>,
    pub artifacts: Vec<Artifact>,
}

/// What a finished command produced.
#[derive(Debug)]
pub struct RunOutcome {
    pub exit_code: u8,
    pub manifest: Manifest,
    pub message: Option<String>,
}

pub struct Runner {
    pub quiet: bool,
}

impl Runner {
    fn progress(&self, msg: impl FnOnce() -> String) {
        if !self.quiet {
            eprintln!("{}", msg());
        }
    }

    /// Solves every H in `grid` by continuation: the leaf with smallest `|H|`
    /// starts from the harmonic extension, the others from their converged
    /// inner neighbour. Leaves are analyzed in parallel afterwards.
    pub fn solve_grid(&self, scn: &Scenario, grid: &[f64]) -> Vec<(f64, LeafOutcome)> {
        let n = grid.len();
        let mut raw: Vec<Option<Result<SurfaceSolution, cmc_solver::SolverError>>> = (0..n).map(|_| None).collect();
        let start = (0..n).min_by(|&a, &b| grid[a].abs().total_cmp(&grid[b].abs())).unwrap_or(0);
        let order = std::iter::once(start).chain(start + 1..n).chain((0..start).rev());
        for k in order {
            let neighbour = if k > start { k - 1 } else { k + 1 };
            let init = if k == start {
                None
            } else {
                match &raw[neighbour] {
                    Some(Ok(s)) => Some(s.u.clone()),
                    _ => None,
                }
            };
            self.progress(|| format!("solving H = {} on {}x{}", grid[k], scn.mesh.n_r, scn.mesh.n_theta));
            raw[k] = Some(scn.solve(grid[k], init.as_deref()));
        }
        std::thread::scope(|s| {
            let handles: Vec<_> = raw
                .into_iter()
                .map(|r| s.spawn(move || LeafOutcome::from_result(r.expect("every leaf solved"))))
                .collect();
            grid.iter()
                .zip(handles)
                .map(|(&h, hd)| (h, hd.join().expect("leaf analysis panicked")))
                .collect()
        })
    }

    pub fn run(&self, cmd: Command, config: ScenarioConfig, out: &Path) -> Result<RunOutcome, CliError> {
        match cmd {
            Command::Solve if config.h_grid.len() != 1 => {
                return Err(CliError::Config(format!("solve takes a single H, got {}", config.h_grid.len())))
            }
            Command::Sweep if config.h_grid.len() < 2 => {
                return Err(CliError::Config("sweep needs at least two H values".into()))
            }
            _ => {}
        }
        let scn = Scenario::new(config)?;
        let qs = qs_norm_estimate_seeded(scn.curve.map(), QS_NORM_QUADRUPLES, scn.config.seed)
            .map_err(|e| CliError::Config(format!("boundary: {e}")))?;
        let boundary = BoundarySummary {
            qs_norm: qs.value,
            qs_norm_quadruples: qs.n_quadruples,
            qs_norm_l_max: qs.l_max,
            acausal_margin: scn.curve.acausal_margin,
        };
        let grid = scn.config.h_grid.clone();
        let leaves = self.solve_grid(&scn, &grid);
        let complete = leaves.iter().all(|(_, l)| l.is_converged());

        let mut artifacts = Vec::new();
        let mut summaries = Vec::new();
        for (k, (h, leaf)) in leaves.iter().enumerate() {
            let name = match cmd {
                Command::Solve => "surface.csv".to_string(),
                _ => format!("surface_{k:03}.csv"),
            };
            let file = match (cmd, leaf) {
                (Command::Validate, _) | (_, LeafOutcome::Failed(_)) => None,
                (_, LeafOutcome::Converged(s, a)) => {
                    artifacts.push(write_atomic(out, &name, &surface_csv(s, Some(a)))?);
                    Some(name)
                }
                (_, LeafOutcome::Stalled(s, _)) => {
                    artifacts.push(write_atomic(out, &name, &surface_csv(s, None))?);
                    Some(name)
                }
            };
            summaries.push(LeafSummary::new(*h, leaf, file));
        }

        let mut invariants = vec![
            validate::convergence_check(&leaves),
            validate::spacelike_check(&leaves, scn.config.tolerances.eps_sl),
            validate::gauss_check(&leaves),
            validate::curvature_check(&leaves),
        ];
        let mut monotonicity = None;
        if matches!(cmd, Command::Sweep | Command::Export) {
            artifacts.push(write_atomic(out, "foliation.csv", &foliation_csv(&scn.mesh, &leaves))?);
            let sols: Vec<SurfaceSolution> = leaves
                .iter()
                .filter_map(|(_, l)| match l {
                    LeafOutcome::Converged(s, _) => Some(s.as_ref().clone()),
                    _ => None,
                })
                .collect();
            if sols.len() >= 2 {
                let rep = check_monotone(&sols, scn.config.tolerances.tol_mono);
                monotonicity = Some(MonotonicitySummary {
                    leaves_compared: sols.len(),
                    min_interior_gap: rep.min_interior_gap,
                    min_boundary_gap: rep.min_boundary_gap,
                    violations: rep.violations,
                    pass: rep.pass,
                });
            }
            invariants.push(validate::monotonicity_check(&leaves, scn.config.tolerances.tol_mono));
        }
        if cmd == Command::Export {
            artifacts.push(write_atomic(out, "boundary.csv", &boundary_csv(&scn.curve))?);
        }
        if cmd == Command::Validate {
            let (coarse, fine) = validate::refinement_pair(&scn);
            let other_n = if coarse == scn.config.mesh.n_r { fine } else { coarse };
            let companion = scn.with_rings(other_n)?;
            let other = self.solve_grid(&companion, &grid);
            invariants = validate::full_suite(&scn, &leaves, &other);
        }

        let failed = failing(&invariants);
        let (exit_code, message) = if cmd == Command::Validate {
            if failed.is_empty() {
                (0, None)
            } else {
                (3, Some(CliError::Invariant(failed).to_string()))
            }
        } else if !complete {
            let bad: Vec<String> = leaves.iter().filter(|(_, l)| !l.is_converged()).map(|(h, _)| h.to_string()).collect();
            (2, Some(format!("leaves did not converge: H = {}", bad.join(", "))))
        } else {
            (0, None)
        };

        let mut config = scn.config.clone();
        config.output_dir = out.to_path_buf();
        let manifest = Manifest {
            schema_version: SCHEMA_VERSION,
            command: cmd.name(),
            config,
            boundary,
            complete,
            leaves: summaries,
            monotonicity,
            invariants,
            artifacts,
        };
        let mut json = serde_json::to_string_pretty(&manifest).map_err(|e| CliError::Pipeline(e.to_string()))?;
        json.push('\n');
        write_atomic(out, "manifest.json", json.as_bytes())?;
        if cmd == Command::Validate {
            let mut report = serde_json::to_string_pretty(&manifest.invariants).map_err(|e| CliError::Pipeline(e.to_string()))?;
            report.push('\n');
            write_atomic(out, "validation.json", report.as_bytes())?;
        }
        Ok(RunOutcome { exit_code, manifest, message })
    }
}
