use boundary_data::BoundaryError;
use thiserror::Error;

use crate::newton::SurfaceSolution;

#[derive(Debug, Error)]
pub enum SolverError {
    #[error("invalid mesh: {0}")]
    InvalidMesh(String),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("graph is not spacelike near node {node}: margin {margin:e}")]
    NotSpacelike { node: usize, margin: f64 },
    #[error("Newton stalled after {iterations} iterations with residual {residual:e}: {reason}")]
    NoConvergence {
        iterations: usize,
        residual: f64,
        reason: String,
        best: Box<SurfaceSolution>,
    },
    #[error("sparse factorization failed: {0}")]
    LinearSolve(String),
    #[error("leaf H = {h} failed: {source}")]
    LeafFailed {
        h: f64,
        #[source]
        source: Box<SolverError>,
    },
    #[error(transparent)]
    Boundary(#[from] BoundaryError),
}
