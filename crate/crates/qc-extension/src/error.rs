use ads_core::AdsError;
use surface_geometry::GeometryError;
use thiserror::Error;

#[derive(Debug, PartialEq, Error)]
pub enum QcError {
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error("left projection folds over near nodes {nodes:?}")]
    ProjectionFold { nodes: Vec<usize> },
    #[error("sup |mu| = {sup_mu} is not below 1")]
    NotQuasiconformal { sup_mu: f64 },
    #[error("landslide angle undefined: {unmasked} of {total} nodes are non-umbilic")]
    LandslideUndefined { unmasked: usize, total: usize },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error(transparent)]
    Geometry(#[from] GeometryError),
    #[error(transparent)]
    Ads(#[from] AdsError),
}
