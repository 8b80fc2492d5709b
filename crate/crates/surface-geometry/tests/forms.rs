use boundary_data::*;
use cmc_solver::*;
use nalgebra::Matrix2;
use surface_geometry::*;

fn trig_surface(a: f64, k: u32, h: f64, n_r: usize) -> SurfaceSolution {
    let qc = make_quasicircle(&QuasiSymmetricMap::trig(a, k).unwrap(), DEFAULT_N_SAMPLES).unwrap();
    let mesh = build_mesh(3.0, n_r, 2 * n_r).unwrap();
    let bc = dirichlet_data(&qc, &mesh, h, Truncation::UmbilicTail);
    solve(&mesh, &bc, h, None, &SolverOptions::default()).unwrap()
}

/// Smooth analytic height field, in hyperbolic polar coordinates.
fn analytic_u(r: f64, th: f64) -> f64 {
    let q = (0.5 * r).tanh();
    0.1 * q * q * (2.0 * th).cos() + 0.05 * q * th.cos() - 0.2 * q * q
}

/// Mean curvature of the graph of `analytic_u` from the divergence form
/// `H = -div(cosh^2 r v grad u) / (2 cosh r)` with fine central differences.
fn analytic_mean_curvature(r: f64, th: f64) -> f64 {
    let d = 1e-4;
    let flux = |r: f64, th: f64| {
        let ur = (analytic_u(r + d, th) - analytic_u(r - d, th)) / (2.0 * d);
        let ut = (analytic_u(r, th + d) - analytic_u(r, th - d)) / (2.0 * d);
        let (s, c) = (r.sinh(), r.cosh());
        let v = 1.0 / (1.0 - c * c * (ur * ur + ut * ut / (s * s))).sqrt();
        (s * c * c * v * ur, c * c * v * ut)
    };
    let e = 1e-3;
    let s = r.sinh();
    let div = (flux(r + e, th).0 - flux(r - e, th).0) / (2.0 * e * s)
        + (flux(r, th + e).1 - flux(r, th - e).1) / (2.0 * e * s * s);
    -div / (2.0 * r.cosh())
}

fn analytic_h_error(n_r: usize) -> f64 {
    let mesh = build_mesh(3.0, n_r, 2 * n_r).unwrap();
    let u = (0..mesh.n_nodes()).map(|n| {
        let (r, th) = mesh.polar(n);
        analytic_u(r, th)
    });
    let forms = compute_forms(&SurfaceSolution::from_heights(&mesh, 0.0, u.collect())).unwrap();
    forms
        .checked()
        .filter(|f| f.node != 0)
        .map(|f| {
            let (r, th) = mesh.polar(f.node);
            (f.shape.h - analytic_mean_curvature(r, th)).abs()
        })
        .fold(0.0, f64::max)
}

#[test]
fn plane_has_vanishing_shape_operator() {
    let mesh = build_mesh(3.0, 16, 32).unwrap();
    let forms = compute_forms(&SurfaceSolution::from_heights(&mesh, 0.0, vec![0.0; mesh.n_nodes()])).unwrap();
    assert_eq!(forms.nodes.len(), mesh.n_nodes());
    for f in &forms.nodes {
        assert!(f.shape.b.norm() < 1e-12, "node {}", f.node);
        assert!(f.shape.i.determinant() > 0.0);
        assert!(ads_core::is_future(&f.point, &f.normal));
    }
}

#[test]
fn umbilic_shape_operator_is_past_side_multiple_of_identity() {
    let rho = 0.3;
    let mut errs = Vec::new();
    for n_r in [16, 32, 64] {
        let mesh = build_mesh(3.0, n_r, 2 * n_r).unwrap();
        let forms = compute_forms(&exact_umbilic(rho, &mesh).unwrap()).unwrap();
        let target = Matrix2::identity() * -rho.tan();
        errs.push(forms.checked().map(|f| (f.shape.b - target).norm()).fold(0.0, f64::max));
        assert!((umbilic_mean_curvature(rho) + rho.tan()).abs() < 1e-15);
    }
    assert!(errs[1] < 3e-3, "{errs:?}");
    assert!(errs[0] / errs[1] > 3.4 && errs[1] / errs[2] > 3.6, "{errs:?}");
}

#[test]
fn fitted_mean_curvature_converges_to_analytic_oracle() {
    let e: Vec<f64> = [16, 32, 64].iter().map(|&n| analytic_h_error(n)).collect();
    assert!(e[2] < 2.5e-4, "{e:?}");
    assert!(e[0] / e[1] > 2.9 && e[1] / e[2] > 2.9, "{e:?}");
}

#[test]
fn solved_surface_has_prescribed_mean_curvature() {
    let e: Vec<f64> = [16, 32]
        .iter()
        .map(|&n| {
            let forms = compute_forms(&trig_surface(0.2, 2, 0.5, n)).unwrap();
            forms.checked().map(|f| (f.shape.h - 0.5).abs()).fold(0.0, f64::max)
        })
        .collect();
    assert!(e[1] < 5e-3 && e[0] / e[1] > 3.5, "{e:?}");
}

#[test]
fn gauss_identity_holds_per_node() {
    for (a, k, h) in [(0.2, 2, 0.5), (0.3, 1, -1.0), (0.1, 3, 2.0)] {
        let forms = compute_forms(&trig_surface(a, k, h, 16)).unwrap();
        for f in &forms.nodes {
            let s = &f.shape;
            let (k1, k2) = s.principal();
            assert!((s.k + 1.0 + s.b.determinant()).abs() < 1e-10);
            assert!((s.k + 1.0 + k1 * k2).abs() < 1e-10);
            assert!((0.5 * (k1 + k2) - s.h).abs() < 1e-12);
        }
    }
}

#[test]
fn forms_are_consistent_with_tangent_frame() {
    let forms = compute_forms(&trig_surface(0.3, 2, 0.5, 16)).unwrap();
    for f in &forms.nodes {
        let [ta, tb] = f.tangents;
        let dot = ads_core::inner;
        let gram = Matrix2::new(dot(&ta, &ta), dot(&ta, &tb), dot(&ta, &tb), dot(&tb, &tb));
        assert!((gram - f.shape.i).norm() < 1e-10 * f.shape.i.norm());
        assert!((dot(&f.normal, &f.normal) + 1.0).abs() < 1e-10);
        assert!(dot(&f.normal, &ta).abs() < 1e-10 && dot(&f.normal, &f.point).abs() < 1e-10);
        // B is I-self-adjoint and J is an I-rotation
        let ib = f.shape.i * f.shape.b;
        assert!((ib - ib.transpose()).norm() < 1e-9 * (1.0 + ib.norm()));
        assert!((f.shape.j * f.shape.j + Matrix2::identity()).norm() < 1e-10);
    }
}

#[test]
fn bounds_fixtures() {
    // umbilic: lambda = 0, full margin
    let mesh = build_mesh(3.0, 32, 64).unwrap();
    let rho = 0.3;
    let forms = compute_forms(&exact_umbilic(rho, &mesh).unwrap()).unwrap();
    let h = -rho.tan();
    let rep = principal_bounds_check(&forms, h);
    assert!(rep.max_lambda < 5e-3, "{}", rep.max_lambda);
    assert!((rep.margin - (1.0 + h * h).sqrt()).abs() < 5e-3);
    assert!(rep.violations.is_empty());

    // flat horosphere: principal curvatures +-1 reach the bound exactly
    let horo = PointForms::from_forms(Matrix2::identity(), Matrix2::new(1.0, 0.0, 0.0, -1.0)).unwrap();
    let rep = principal_bounds([(0, &horo)], 0.0, 0.0);
    assert_eq!(rep.max_lambda, 1.0);
    assert_eq!(rep.margin, 0.0);
    assert!(rep.violations.is_empty());
    assert_eq!(rep.max_k, 0.0);

    let over = PointForms::from_forms(Matrix2::identity(), Matrix2::new(1.5, 0.0, 0.0, -1.5)).unwrap();
    assert_eq!(principal_bounds([(7, &over)], 0.0, 0.1).violations, vec![7]);
}

/// Regression baseline for the trig a = 0.2, k = 2, H = 0.5 surface on 32 x 64.
const TRIG_MARGIN_BASELINE: f64 = 0.928_500_03;

#[test]
fn solved_surface_is_uniformly_negatively_curved() {
    let forms = compute_forms(&trig_surface(0.2, 2, 0.5, 32)).unwrap();
    let rep = principal_bounds_check(&forms, 0.5);
    assert!(rep.violations.is_empty());
    assert!(rep.margin > 0.0 && rep.max_k < 0.0);
    assert!((rep.margin - TRIG_MARGIN_BASELINE).abs() < 1e-6, "{}", rep.margin);
    assert_eq!(rep.checked, 1 + 30 * 64);
}

#[test]
fn beta_identity_constant_field() {
    let h = 0.5;
    let forms = compute_forms(&trig_surface(0.2, 2, h, 16)).unwrap();
    let n = forms.nodes.len();
    let beta = vec![0.5 * (1.0 + h * h).ln(); n];
    let lam = vec![1.0; n];
    let res = beta_residual_fields(&forms, &beta, &lam, h, LAMBDA_MIN).unwrap();
    assert!(res.evaluated > 0);
    assert!(res.max_abs < 1e-12);
    assert!(res.values.iter().all(|v| v.is_nan() || v.abs() < 1e-12));
}

#[test]
fn beta_identity_umbilic_is_fully_masked() {
    let mesh = build_mesh(3.0, 16, 32).unwrap();
    let forms = compute_forms(&exact_umbilic(0.3, &mesh).unwrap()).unwrap();
    // the fitted lambda is discretization noise of order h^2; the exact field is zero
    assert!(forms.checked().all(|f| f.shape.lambda < 1e-2));
    let masked = vec![0.0; forms.nodes.len()];
    assert_eq!(
        beta_residual_fields(&forms, &masked, &masked, -0.3f64.tan(), LAMBDA_MIN),
        Err(GeometryError::NothingToCheck)
    );
}

#[test]
fn beta_identity_residual_decreases_under_refinement() {
    let r: Vec<BetaResidual> = [16, 32]
        .iter()
        .map(|&n| beta_residual(&compute_forms(&trig_surface(0.3, 2, 0.5, n)).unwrap(), 0.5, LAMBDA_MIN).unwrap())
        .collect();
    assert!(r[1].evaluated > r[0].evaluated);
    let order = (r[0].max_abs / r[1].max_abs).log2();
    assert!(order >= 1.0, "{} -> {}", r[0].max_abs, r[1].max_abs);
}
