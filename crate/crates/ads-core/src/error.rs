use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum AdsError {
    #[error("invalid disk point: |z| = {modulus} is not below 1")]
    InvalidDiskPoint { modulus: f64 },
    #[error("point is off the quadric: <x,x> = {norm}")]
    OffQuadric { norm: f64 },
    #[error("points are not timelike related: <p,q> = {inner}")]
    NotTimelikeRelated { inner: f64 },
    #[error("ruling matrix determinant {det} is not 1")]
    NotUnimodular { det: f64 },
    #[error("invalid frame: {0}")]
    InvalidFrame(String),
    #[error("vector is not a nonzero null vector")]
    NotNull,
    #[error("null lift is discontinuous at sample {index}")]
    BadLift { index: usize },
    #[error("need at least {needed} samples, got {got}")]
    TooFewSamples { needed: usize, got: usize },
}
