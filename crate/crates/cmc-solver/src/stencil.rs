//! Flux-form discretization of the mean curvature operator.
//!
//! For a graph `t = u(r, theta)` over the hyperbolic disk the mean curvature
//! with respect to the past normal is `H = -D(u) / (2 cosh r)` with
//!
//! `D(u) = div_hyp(cosh^2 r * v * grad u)`,
//! `v = (1 - cosh^2 r * |grad u|^2)^(-1/2)`.
//!
//! Each cell face carries one flux; a face knows which nodal values enter its
//! two derivative approximations and which residual rows it feeds.

use crate::error::SolverError;
use crate::mesh::DiskMesh;

#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Terms {
    pub idx: [usize; 4],
    pub w: [f64; 4],
    pub len: usize,
}

impl Terms {
    fn push(&mut self, node: usize, w: f64) {
        self.idx[self.len] = node;
        self.w[self.len] = w;
        self.len += 1;
    }

    fn eval(&self, u: &[f64]) -> f64 {
        (0..self.len).map(|k| self.w[k] * u[self.idx[k]]).sum()
    }

    pub fn iter(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        (0..self.len).map(|k| (self.idx[k], self.w[k]))
    }
}

#[derive(Debug, Clone, Copy)]
pub(crate) struct Face {
    radial: bool,
    coef: f64,
    n2: f64,
    inv_s2: f64,
    /// `u_r` at the face.
    pub a: Terms,
    /// `u_theta` at the face.
    pub b: Terms,
    pub rows: [(usize, f64); 2],
    pub n_rows: usize,
    owner: usize,
}

/// Flux value and its partial derivatives in `(a, b)`.
#[derive(Debug, Clone, Copy)]
pub(crate) struct FluxEval {
    pub flux: f64,
    pub da: f64,
    pub db: f64,
}

impl Face {
    fn margin(&self, a: f64, b: f64) -> f64 {
        1.0 - self.n2 * (a * a + b * b * self.inv_s2)
    }

    pub fn eval(&self, u: &[f64], eps_sl: f64) -> Result<FluxEval, SolverError> {
        let a = self.a.eval(u);
        let b = self.b.eval(u);
        let q = self.margin(a, b);
        if !(q >= eps_sl) {
            return Err(SolverError::NotSpacelike { node: self.owner, margin: q });
        }
        let v = q.powf(-0.5);
        let v3 = v * v * v;
        let va = v3 * self.n2 * a;
        let vb = v3 * self.n2 * b * self.inv_s2;
        Ok(if self.radial {
            FluxEval { flux: self.coef * v * a, da: self.coef * (v + a * va), db: self.coef * a * vb }
        } else {
            FluxEval { flux: self.coef * v * b, da: self.coef * b * va, db: self.coef * (v + b * vb) }
        })
    }

    pub fn rows(&self) -> &[(usize, f64)] {
        &self.rows[..self.n_rows]
    }
}

/// Precomputed faces for one mesh.
#[derive(Debug, Clone)]
pub(crate) struct Discretization {
    pub mesh: DiskMesh,
    pub faces: Vec<Face>,
    /// Faces whose derivative stencils involve each interior node.
    pub faces_of_node: Vec<Vec<usize>>,
}

impl Discretization {
    pub fn new(mesh: &DiskMesh) -> Self {
        let n_r = mesh.n_r;
        let nt = mesh.n_theta;
        let h = mesh.h_r();
        let ht = mesh.h_theta();
        let n_int = mesh.n_interior();
        let sinh = |i: usize| mesh.ring_radius(i).sinh();
        let cosh = |i: usize| mesh.ring_radius(i).cosh();
        // -1/(2 N) times the divergence weight for each row
        let row_scale = |node: usize| -0.5 / mesh.chi(node);
        let center_area = TAU_F * ((0.5 * h).cosh() - 1.0);

        let mut faces = Vec::with_capacity(2 * mesh.n_nodes());
        for i in 0..n_r {
            let rf = (i as f64 + 0.5) * h;
            let (sf, cf) = (rf.sinh(), rf.cosh());
            for j in 0..nt {
                let inner = mesh.node(i, j);
                let outer = mesh.node(i + 1, j);
                let mut a = Terms::default();
                a.push(outer, 1.0 / h);
                a.push(inner, -1.0 / h);
                let mut b = Terms::default();
                let wb = 1.0 / (4.0 * ht);
                b.push(mesh.node(i + 1, j + 1), wb);
                b.push(mesh.node(i + 1, j + nt - 1), -wb);
                if i > 0 {
                    b.push(mesh.node(i, j + 1), wb);
                    b.push(mesh.node(i, j + nt - 1), -wb);
                }
                let mut rows = [(0usize, 0.0f64); 2];
                let mut n_rows = 0;
                let w_inner = if i == 0 { ht / center_area } else { 1.0 / (h * sinh(i)) };
                rows[n_rows] = (inner, w_inner * row_scale(inner));
                n_rows += 1;
                if outer < n_int {
                    rows[n_rows] = (outer, -row_scale(outer) / (h * sinh(i + 1)));
                    n_rows += 1;
                }
                faces.push(Face {
                    radial: true,
                    coef: sf * cf * cf,
                    n2: cf * cf,
                    inv_s2: 1.0 / (sf * sf),
                    a,
                    b,
                    rows,
                    n_rows,
                    owner: inner,
                });
            }
        }
        for i in 1..n_r {
            let (s, c) = (sinh(i), cosh(i));
            for j in 0..nt {
                let left = mesh.node(i, j);
                let right = mesh.node(i, j + 1);
                let wa = 1.0 / (4.0 * h);
                let mut a = Terms::default();
                a.push(mesh.node(i + 1, j), wa);
                a.push(mesh.node(i + 1, j + 1), wa);
                if i > 1 {
                    a.push(mesh.node(i - 1, j), -wa);
                    a.push(mesh.node(i - 1, j + 1), -wa);
                } else {
                    a.push(0, -2.0 * wa);
                }
                let mut b = Terms::default();
                b.push(right, 1.0 / ht);
                b.push(left, -1.0 / ht);
                let w = 1.0 / (ht * s * s);
                faces.push(Face {
                    radial: false,
                    coef: c * c,
                    n2: c * c,
                    inv_s2: 1.0 / (s * s),
                    a,
                    b,
                    rows: [(left, w * row_scale(left)), (right, -w * row_scale(right))],
                    n_rows: 2,
                    owner: left,
                });
            }
        }

        let mut faces_of_node = vec![Vec::new(); n_int];
        for (f, face) in faces.iter().enumerate() {
            for (k, _) in face.a.iter().chain(face.b.iter()) {
                if k < n_int && !faces_of_node[k].contains(&f) {
                    faces_of_node[k].push(f);
                }
            }
        }
        Self { mesh: *mesh, faces, faces_of_node }
    }

    fn worst_face(&self, u: &[f64]) -> SolverError {
        let (node, margin) = self
            .faces
            .iter()
            .map(|f| (f.owner, f.margin(f.a.eval(u), f.b.eval(u))))
            .fold((0, f64::INFINITY), |best, cur| if cur.1 < best.1 || cur.1.is_nan() { cur } else { best });
        SolverError::NotSpacelike { node, margin }
    }

    /// Residual `-D(u)/(2 cosh r) - H` at interior nodes.
    pub fn residual(&self, u: &[f64], h: f64, eps_sl: f64) -> Result<Vec<f64>, SolverError> {
        let mut res = vec![-h; self.mesh.n_interior()];
        for face in &self.faces {
            let fe = match face.eval(u, eps_sl) {
                Ok(fe) => fe,
                Err(_) => return Err(self.worst_face(u)),
            };
            for &(row, w) in face.rows() {
                res[row] += w * fe.flux;
            }
        }
        Ok(res)
    }

    /// Size of the residual that floating-point cancellation alone can
    /// produce at `u`. Each face contributes its flux plus the flux
    /// sensitivity to the rounding of its two difference quotients.
    pub fn rounding_floor(&self, u: &[f64], h: f64, eps_sl: f64) -> f64 {
        let spread = |t: &Terms| t.iter().map(|(k, w)| (w * u[k]).abs()).sum::<f64>();
        let mut mag = vec![h.abs(); self.mesh.n_interior()];
        for face in &self.faces {
            if let Ok(fe) = face.eval(u, eps_sl) {
                let m = fe.flux.abs() + fe.da.abs() * spread(&face.a) + fe.db.abs() * spread(&face.b);
                for &(row, w) in face.rows() {
                    mag[row] += (w * m).abs();
                }
            }
        }
        ROUNDING_FACTOR * f64::EPSILON * mag.iter().fold(0.0_f64, |m, &x| m.max(x))
    }
}

const ROUNDING_FACTOR: f64 = 16.0;

const TAU_F: f64 = std::f64::consts::TAU;
