use ads_core::AdsError;
use thiserror::Error;

#[derive(Debug, Error, PartialEq)]
pub enum GeometryError {
    #[error("degenerate stencil at node {node}: {reason}")]
    DegenerateNode { node: usize, reason: String },
    #[error("equidistant map is singular (|det| = {det:e}){}", node.map(|n| format!(" at node {n}")).unwrap_or_default())]
    NonSmoothEquidistant { det: f64, node: Option<usize> },
    #[error("margin eps must lie in (0, 1], got {0}")]
    InvalidMargin(f64),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("every node is masked; nothing to check")]
    NothingToCheck,
    #[error(transparent)]
    Ads(#[from] AdsError),
}
