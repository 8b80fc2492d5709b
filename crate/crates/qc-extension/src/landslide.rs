use std::f64::consts::FRAC_PI_2;

use ads_core::{Complex64, Matrix2, SpacetimePoint};
use surface_geometry::{parameter_gradient, FundamentalForms, NodeForms, LAMBDA_MIN};

use crate::error::QcError;
use crate::extension::principal_frame;
use crate::ruling::project_lr;

/// Fraction of checked nodes that must survive the umbilic mask.
pub const MIN_UNMASKED_FRACTION: f64 = 0.1;

/// Hopf differentials at one node, as the coefficient of `dz^2` in the
/// conformal coordinate `z` of the frame `(e1, J e1)`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NodeHopf {
    pub node: usize,
    /// `I (HE + J) B0 + i I J (HE + J) B0`.
    pub hopf_l: Complex64,
    /// `I (HE - J) B0 + i I J (HE - J) B0`.
    pub hopf_r: Complex64,
    /// (2,0) part of the pullback of the disk metric by the discrete `Pi_l`.
    pub hopf_l_measured: Complex64,
    pub hopf_r_measured: Complex64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct HopfField {
    /// Unmasked checked nodes only.
    pub nodes: Vec<NodeHopf>,
    /// Half the circular mean of `arg(hopf_l / hopf_r)`.
    pub theta_est: f64,
    /// Same, from the measured differentials.
    pub theta_measured: f64,
    /// Circular standard deviation of `arg(hopf_l / hopf_r)`.
    pub circular_std: f64,
    pub circular_std_measured: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Landslide {
    pub theta_est: f64,
    /// `pi/2 - arctan(H)`.
    pub expected: f64,
    /// Distance from `theta_est` to `expected` modulo `pi`.
    pub error: f64,
    pub circular_std: f64,
}

pub fn expected_landslide_angle(h: f64) -> f64 {
    FRAC_PI_2 - h.atan()
}

/// Distance between two angles defined modulo `pi`.
pub fn angle_distance_mod_pi(a: f64, b: f64) -> f64 {
    (Complex64::from_polar(1.0, 2.0 * (a - b)).arg() / 2.0).abs()
}

/// Half the argument and the circular standard deviation of the mean of
/// `e^{i arg}` over `ratios`.
fn circular_stats(ratios: impl Iterator<Item = Complex64>) -> (f64, f64) {
    let (mut sum, mut n) = (Complex64::new(0.0, 0.0), 0usize);
    for r in ratios {
        sum += r / r.norm();
        n += 1;
    }
    let mean = sum / n as f64;
    let r = mean.norm().min(1.0);
    (0.5 * mean.arg(), (-2.0 * r.ln()).max(0.0).sqrt())
}

/// `Q(dz, dz)` for the complex bilinear form `Q = re + i im`, read in the
/// frame whose columns are `e1`, `e2 = J e1`.
fn dz2_coefficient(re: &Matrix2<f64>, im: &Matrix2<f64>, frame: &Matrix2<f64>) -> Complex64 {
    let (a, b) = (frame.transpose() * re * frame, frame.transpose() * im * frame);
    let q = |r: usize, c: usize| Complex64::new(a[(r, c)], b[(r, c)]);
    0.25 * (q(0, 0) - q(1, 1) - Complex64::i() * 2.0 * q(0, 1))
}

/// `B0` is the traceless part of the fitted operator; `h` in the factor
/// `HE +- J` is the prescribed mean curvature.
fn formula_hopf(f: &NodeForms, h: f64, sign: f64, frame: &Matrix2<f64>) -> Complex64 {
    let s = &f.shape;
    let b0 = s.b - Matrix2::identity() * s.h;
    let op = (Matrix2::identity() * h + s.j * sign) * b0;
    dz2_coefficient(&(s.i * op), &(s.i * s.j * op), frame)
}

fn measured_hopf(forms: &FundamentalForms, node: usize, w: &[Complex64], frame: &Matrix2<f64>) -> Result<Complex64, QcError> {
    let [da, db] = parameter_gradient(forms.mesh(), node, |k| [w[k].re, w[k].im])?;
    let d = Matrix2::new(da[0], db[0], da[1], db[1]);
    let conformal = 4.0 / (1.0 - w[node].norm_sqr()).powi(2);
    let g = d.transpose() * d * conformal;
    Ok(dz2_coefficient(&g, &Matrix2::zeros(), frame))
}

/// Hopf differentials of both projections and the landslide angle of
/// `Pi_r o Pi_l^{-1}` they determine.
///
/// Nodes with `lambda < max(LAMBDA_MIN, h_r^2)` are masked: there `B0` is
/// below the fit's resolution and the ratio has no meaningful argument.
pub fn landslide_angle(forms: &FundamentalForms, h: f64) -> Result<(Landslide, HopfField), QcError> {
    if !h.is_finite() {
        return Err(QcError::InvalidInput(format!("mean curvature {h}")));
    }
    let mask = LAMBDA_MIN.max(forms.mesh().h_r().powi(2));
    let total = forms.checked().count();
    let unmasked: Vec<&NodeForms> = forms.checked().filter(|f| f.shape.lambda >= mask).collect();
    if unmasked.is_empty() || (unmasked.len() as f64) < MIN_UNMASKED_FRACTION * total as f64 {
        return Err(QcError::LandslideUndefined {
            unmasked: unmasked.len(),
            total,
        });
    }

    let projected = forms
        .nodes
        .iter()
        .map(|f| project_lr(&SpacetimePoint(f.point), &f.normal))
        .collect::<Result<Vec<_>, _>>()?;
    let pl: Vec<Complex64> = projected.iter().map(|p| p.0).collect();
    let pr: Vec<Complex64> = projected.iter().map(|p| p.1).collect();

    let nodes = unmasked
        .iter()
        .map(|f| {
            let frame = principal_frame(&f.shape);
            Ok(NodeHopf {
                node: f.node,
                hopf_l: formula_hopf(f, h, 1.0, &frame),
                hopf_r: formula_hopf(f, h, -1.0, &frame),
                hopf_l_measured: measured_hopf(forms, f.node, &pl, &frame)?,
                hopf_r_measured: measured_hopf(forms, f.node, &pr, &frame)?,
            })
        })
        .collect::<Result<Vec<_>, QcError>>()?;

    let (theta_est, circular_std) = circular_stats(nodes.iter().map(|n| n.hopf_l / n.hopf_r));
    let (theta_measured, circular_std_measured) =
        circular_stats(nodes.iter().map(|n| n.hopf_l_measured / n.hopf_r_measured));
    let expected = expected_landslide_angle(h);
    let landslide = Landslide {
        theta_est,
        expected,
        error: angle_distance_mod_pi(theta_est, expected),
        circular_std,
    };
    Ok((
        landslide,
        HopfField {
            nodes,
            theta_est,
            theta_measured,
            circular_std,
            circular_std_measured,
        },
    ))
}
