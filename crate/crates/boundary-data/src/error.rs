use ads_core::AdsError;
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum BoundaryError {
    #[error("cross-ratio of a quadruple with repeated points")]
    DegenerateQuadruple,
    #[error("need at least {needed} quadruples, got {got}")]
    TooFewQuadruples { needed: usize, got: usize },
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
    #[error("map is not an increasing degree-one homeomorphism near sample {index}")]
    NotAHomeomorphism { index: usize },
    #[error("graph leaves the affine chart: |tau| = {tau} at alpha = {alpha}")]
    NotInChart { alpha: f64, tau: f64 },
    #[error("graph is not acausal with margin: 1 - max|dg/dalpha| = {margin}")]
    NotAcausal { margin: f64 },
    #[error("invalid family parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Ads(#[from] AdsError),
}
