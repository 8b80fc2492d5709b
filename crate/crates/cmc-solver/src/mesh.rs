use std::f64::consts::TAU;

use ads_core::{Complex64, ProductPoint};

use crate::error::SolverError;

/// Polar mesh on the hyperbolic disk of radius `r_max`.
///
/// Node `0` is the center; ring `i` (`1..=n_r`) sector `j` (`0..n_theta`) is
/// node `1 + (i - 1) n_theta + j`. Ring `i` sits at hyperbolic radius
/// `i r_max / n_r`, so `|z| = tanh(r / 2)`. Ring `n_r` is the Dirichlet
/// boundary, and interior nodes occupy the contiguous range `0..n_interior()`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiskMesh {
    pub r_max: f64,
    pub n_r: usize,
    pub n_theta: usize,
}

pub const R_MAX_RANGE: (f64, f64) = (1.0, 8.0);
pub const MIN_N_R: usize = 8;
pub const MIN_N_THETA: usize = 16;

pub fn build_mesh(r_max: f64, n_r: usize, n_theta: usize) -> Result<DiskMesh, SolverError> {
    if !(r_max >= R_MAX_RANGE.0 && r_max <= R_MAX_RANGE.1) {
        return Err(SolverError::InvalidMesh(format!(
            "R_max must lie in [{}, {}], got {r_max}",
            R_MAX_RANGE.0, R_MAX_RANGE.1
        )));
    }
    if n_r < MIN_N_R {
        return Err(SolverError::InvalidMesh(format!("n_r must be at least {MIN_N_R}, got {n_r}")));
    }
    if n_theta < MIN_N_THETA || n_theta % 2 != 0 {
        return Err(SolverError::InvalidMesh(format!(
            "n_theta must be even and at least {MIN_N_THETA}, got {n_theta}"
        )));
    }
    Ok(DiskMesh { r_max, n_r, n_theta })
}

/// Position of a node in polar index form.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum NodeIndex {
    Center,
    Ring { i: usize, j: usize },
}

impl DiskMesh {
    pub fn h_r(&self) -> f64 {
        self.r_max / self.n_r as f64
    }

    pub fn h_theta(&self) -> f64 {
        TAU / self.n_theta as f64
    }

    pub fn n_nodes(&self) -> usize {
        1 + self.n_r * self.n_theta
    }

    pub fn n_interior(&self) -> usize {
        1 + (self.n_r - 1) * self.n_theta
    }

    /// Node id of ring `i`, sector `j`; `j` wraps, ring `0` is the center.
    pub fn node(&self, i: usize, j: usize) -> usize {
        if i == 0 {
            0
        } else {
            1 + (i - 1) * self.n_theta + j % self.n_theta
        }
    }

    pub fn index(&self, node: usize) -> NodeIndex {
        if node == 0 {
            NodeIndex::Center
        } else {
            let k = node - 1;
            NodeIndex::Ring { i: 1 + k / self.n_theta, j: k % self.n_theta }
        }
    }

    pub fn is_boundary(&self, node: usize) -> bool {
        node >= self.n_interior()
    }

    pub fn boundary_nodes(&self) -> std::ops::Range<usize> {
        self.n_interior()..self.n_nodes()
    }

    pub fn ring_radius(&self, i: usize) -> f64 {
        self.h_r() * i as f64
    }

    pub fn sector_angle(&self, j: usize) -> f64 {
        self.h_theta() * j as f64
    }

    /// Hyperbolic polar coordinates `(r, theta)` of a node.
    pub fn polar(&self, node: usize) -> (f64, f64) {
        match self.index(node) {
            NodeIndex::Center => (0.0, 0.0),
            NodeIndex::Ring { i, j } => (self.ring_radius(i), self.sector_angle(j)),
        }
    }

    pub fn z(&self, node: usize) -> Complex64 {
        let (r, th) = self.polar(node);
        Complex64::from_polar((0.5 * r).tanh(), th)
    }

    /// `chi = (1 + |z|^2) / (1 - |z|^2) = cosh r`.
    pub fn chi(&self, node: usize) -> f64 {
        self.polar(node).0.cosh()
    }

    pub fn product_point(&self, node: usize, u: f64) -> ProductPoint {
        ProductPoint { z: self.z(node), t: u }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_bad_parameters() {
        assert!(build_mesh(3.0, 4, 17).is_err());
        assert!(build_mesh(3.0, 8, 17).is_err());
        assert!(build_mesh(0.5, 8, 16).is_err());
        assert!(build_mesh(9.0, 8, 16).is_err());
        assert!(build_mesh(3.0, 8, 16).is_ok());
    }

    #[test]
    fn numbering_round_trips() {
        let m = build_mesh(2.0, 8, 16).unwrap();
        assert_eq!(m.n_nodes(), 129);
        for node in 0..m.n_nodes() {
            match m.index(node) {
                NodeIndex::Center => assert_eq!(node, 0),
                NodeIndex::Ring { i, j } => assert_eq!(m.node(i, j), node),
            }
        }
        assert!(m.is_boundary(m.node(8, 0)));
        assert!(!m.is_boundary(m.node(7, 15)));
        assert!((m.chi(m.node(8, 3)) - 2.0f64.cosh()).abs() < 1e-12);
    }
}
