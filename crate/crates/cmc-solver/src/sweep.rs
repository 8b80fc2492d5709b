use std::thread;

use crate::error::SolverError;
use crate::mesh::DiskMesh;
use crate::newton::{solve, SolverOptions, SurfaceSolution};

pub const MAX_ABS_H: f64 = 4.0;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SweepOptions {
    pub solver: SolverOptions,
    pub tol_mono: f64,
    /// Initialize each leaf from its neighbor. When off, leaves start from
    /// `u = 0` and are solved on separate threads.
    pub continuation: bool,
}

impl Default for SweepOptions {
    fn default() -> Self {
        Self { solver: SolverOptions::default(), tol_mono: 1e-8, continuation: true }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MonotonicityReport {
    /// Smallest `u_{k+1} - u_k` over interior nodes and consecutive leaves.
    pub min_interior_gap: f64,
    pub min_boundary_gap: f64,
    /// Number of (pair, node) violations.
    pub violations: usize,
    pub pass: bool,
}

#[derive(Debug, Clone, PartialEq)]
pub struct FoliationSweep {
    pub h_grid: Vec<f64>,
    pub leaves: Vec<SurfaceSolution>,
    pub monotonicity: MonotonicityReport,
}

/// Interior gaps must exceed `tol_mono`; boundary gaps must exceed `-tol_mono`.
pub fn check_monotone(leaves: &[SurfaceSolution], tol_mono: f64) -> MonotonicityReport {
    let mut rep = MonotonicityReport {
        min_interior_gap: f64::INFINITY,
        min_boundary_gap: f64::INFINITY,
        violations: 0,
        pass: true,
    };
    for pair in leaves.windows(2) {
        let mesh = &pair[0].mesh;
        for (node, (a, b)) in pair[0].u.iter().zip(&pair[1].u).enumerate() {
            let gap = b - a;
            let ok = if mesh.is_boundary(node) {
                rep.min_boundary_gap = rep.min_boundary_gap.min(gap);
                gap >= -tol_mono
            } else {
                rep.min_interior_gap = rep.min_interior_gap.min(gap);
                gap > tol_mono
            };
            if !ok {
                rep.violations += 1;
            }
        }
    }
    rep.pass = rep.violations == 0;
    rep
}

/// Solves one leaf per entry of `h_grid`, with Dirichlet data `bc(H)`.
///
/// With continuation the first leaf solved is the one with `|H|` smallest,
/// from `u = 0`; the sweep then proceeds outward in both directions.
pub fn sweep_foliation<F>(
    mesh: &DiskMesh,
    bc: F,
    h_grid: &[f64],
    opts: &SweepOptions,
) -> Result<FoliationSweep, SolverError>
where
    F: Fn(f64) -> Vec<f64> + Sync,
{
    if h_grid.is_empty() {
        return Err(SolverError::InvalidInput("empty H grid".into()));
    }
    if h_grid.iter().any(|h| !(h.abs() <= MAX_ABS_H)) {
        return Err(SolverError::InvalidInput(format!("H values must satisfy |H| <= {MAX_ABS_H}")));
    }
    if h_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(SolverError::InvalidInput("H grid must be strictly increasing".into()));
    }
    let leaf = |h: f64, init: Option<&[f64]>| {
        solve(mesh, &bc(h), h, init, &opts.solver)
            .map_err(|e| SolverError::LeafFailed { h, source: Box::new(e) })
    };

    let leaves: Vec<SurfaceSolution> = if opts.continuation {
        let start = (0..h_grid.len())
            .min_by(|&a, &b| h_grid[a].abs().total_cmp(&h_grid[b].abs()))
            .unwrap_or(0);
        let mut slots: Vec<Option<SurfaceSolution>> = vec![None; h_grid.len()];
        slots[start] = Some(leaf(h_grid[start], None)?);
        for k in start + 1..h_grid.len() {
            let prev = slots[k - 1].as_ref().map(|s| s.u.clone());
            slots[k] = Some(leaf(h_grid[k], prev.as_deref())?);
        }
        for k in (0..start).rev() {
            let prev = slots[k + 1].as_ref().map(|s| s.u.clone());
            slots[k] = Some(leaf(h_grid[k], prev.as_deref())?);
        }
        slots.into_iter().flatten().collect()
    } else {
        let results: Vec<Result<SurfaceSolution, SolverError>> = thread::scope(|s| {
            let handles: Vec<_> = h_grid.iter().map(|&h| s.spawn(move || leaf(h, None))).collect();
            handles
                .into_iter()
                .map(|hd| hd.join().expect("leaf solver thread panicked"))
                .collect()
        });
        results.into_iter().collect::<Result<_, _>>()?
    };
    let monotonicity = check_monotone(&leaves, opts.tol_mono);
    Ok(FoliationSweep { h_grid: h_grid.to_vec(), leaves, monotonicity })
}
