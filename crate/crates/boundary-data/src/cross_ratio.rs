use std::f64::consts::{FRAC_PI_2, TAU};

use ads_core::Complex64;

use crate::error::BoundaryError;
use crate::qsmap::QuasiSymmetricMap;

/// Cap on the hyperbolic translation length of the quadruple family.
pub const L_MAX: f64 = 6.0;

const MIN_QUADRUPLES: usize = 16;

/// `(x4 - x1)(x3 - x2) / ((x2 - x1)(x3 - x4))`.
pub fn cross_ratio(
    x1: Complex64,
    x2: Complex64,
    x3: Complex64,
    x4: Complex64,
) -> Result<Complex64, BoundaryError> {
    let pts = [x1, x2, x3, x4];
    for i in 0..4 {
        for j in i + 1..4 {
            if (pts[i] - pts[j]).norm() <= 1e-15 * (1.0 + pts[i].norm()) {
                return Err(BoundaryError::DegenerateQuadruple);
            }
        }
    }
    Ok((x4 - x1) * (x3 - x2) / ((x2 - x1) * (x3 - x4)))
}

/// Lower bound for `sup |log|cr(phi(Q))||` over quadruples with `cr(Q) = -1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QsNormEstimate {
    pub value: f64,
    pub n_quadruples: usize,
    /// Translation cap of the sampled family; the estimate is exact only
    /// for the capped family.
    pub l_max: f64,
    /// Angles of the maximizing quadruple.
    pub argmax: [f64; 4],
}

fn radical_inverse(mut i: u64, base: u64) -> f64 {
    let inv = 1.0 / base as f64;
    let mut f = inv;
    let mut r = 0.0;
    while i > 0 {
        r += f * (i % base) as f64;
        i /= base;
        f *= inv;
    }
    r
}

/// Angles of `R_psi T_L R_chi (1, i, -1, -i)`, where `T_L` translates by
/// hyperbolic length `L` along the real diameter.
fn quadruple(psi: f64, length: f64, chi: f64) -> [f64; 4] {
    let t = (0.5 * length).tanh();
    let mut out = [0.0; 4];
    for (j, o) in out.iter_mut().enumerate() {
        let z = Complex64::from_polar(1.0, chi + FRAC_PI_2 * j as f64);
        let w = (z + t) / (Complex64::new(1.0, 0.0) + z * t);
        *o = w.arg() + psi;
    }
    out
}

pub fn qs_norm_estimate(phi: &QuasiSymmetricMap, n_quadruples: usize) -> Result<QsNormEstimate, BoundaryError> {
    qs_norm_estimate_seeded(phi, n_quadruples, 0)
}

/// Scans the first `n_quadruples` points of a Halton sequence in
/// `(psi, L, chi)`, starting at index `seed + 1`. Prefixes are nested, so the
/// estimate is nondecreasing in `n_quadruples` for a fixed seed.
pub fn qs_norm_estimate_seeded(
    phi: &QuasiSymmetricMap,
    n_quadruples: usize,
    seed: u64,
) -> Result<QsNormEstimate, BoundaryError> {
    if n_quadruples < MIN_QUADRUPLES {
        return Err(BoundaryError::TooFewQuadruples {
            needed: MIN_QUADRUPLES,
            got: n_quadruples,
        });
    }
    let mut best = QsNormEstimate {
        value: 0.0,
        n_quadruples,
        l_max: L_MAX,
        argmax: [0.0, FRAC_PI_2, 2.0 * FRAC_PI_2, 3.0 * FRAC_PI_2],
    };
    for k in 0..n_quadruples as u64 {
        let idx = seed + k + 1;
        let psi = TAU * radical_inverse(idx, 2);
        let length = L_MAX * radical_inverse(idx, 3);
        let chi = FRAC_PI_2 * radical_inverse(idx, 5);
        let q = quadruple(psi, length, chi);
        let img = q.map(|a| Complex64::from_polar(1.0, phi.eval(a)));
        let cr = cross_ratio(img[0], img[1], img[2], img[3])?;
        let v = cr.norm().ln().abs();
        if v > best.value {
            best.value = v;
            best.argmax = q;
        }
    }
    Ok(best)
}
