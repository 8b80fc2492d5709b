#![allow(dead_code)]

use boundary_data::*;
use cmc_solver::*;
use surface_geometry::*;

pub fn solve_scenario(map: &QuasiSymmetricMap, h: f64, r_max: f64, n_r: usize) -> (SurfaceSolution, FundamentalForms) {
    let qc = make_quasicircle(map, DEFAULT_N_SAMPLES).unwrap();
    let mesh = build_mesh(r_max, n_r, 2 * n_r).unwrap();
    let bc = dirichlet_data(&qc, &mesh, h, Truncation::UmbilicTail);
    let sol = solve(&mesh, &bc, h, None, &SolverOptions::default()).unwrap();
    assert!(sol.converged);
    let forms = compute_forms(&sol).unwrap();
    (sol, forms)
}

pub fn trig(a: f64, k: u32, h: f64, n_r: usize) -> (SurfaceSolution, FundamentalForms) {
    solve_scenario(&QuasiSymmetricMap::trig(a, k).unwrap(), h, 3.0, n_r)
}
