use crate::filters::{Approach, FilterKind};
use crate::image::ColorSpace;

pub type Result<T> = core::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum Error {
    #[error("image dimensions must be at least 1x1, got {width}x{height}")]
    EmptyImage { width: usize, height: usize },

    #[error("expected {expected} pixels, got {actual}")]
    PixelCount { expected: usize, actual: usize },

    #[error("non-finite value at pixel index {index}")]
    NonFinite { index: usize },

    #[error("negative value {value} at index {index} in scalar image")]
    Negative { index: usize, value: f64 },

    #[error("component {value} at pixel index {index} is outside [0, 255]")]
    OutOfRange { index: usize, value: f64 },

    #[error("expected a {expected} image, got {actual}")]
    WrongSpace { expected: ColorSpace, actual: ColorSpace },

    #[error("image size mismatch: {left:?} vs {right:?}")]
    SizeMismatch { left: (usize, usize), right: (usize, usize) },

    #[error("approach {approach} is not valid for the {kind} filter")]
    InvalidApproach { kind: FilterKind, approach: Approach },

    #[error("{kind} is not a denoising filter")]
    NotDenoising { kind: FilterKind },

    #[error("{kind} is not an edge filter")]
    NotEdge { kind: FilterKind },

    #[error("invalid noise parameter {value} for {model}")]
    InvalidNoise { model: &'static str, value: f64 },

    #[error("unknown {what}: {value}")]
    UnknownName { what: &'static str, value: alloc::string::String },

    #[error("segment length must be at least 2, got {0}")]
    SegmentLength(usize),

    #[error("synthetic documents need at least 64x64 pixels, got {width}x{height}")]
    TooSmall { width: usize, height: usize },

    #[error("metric undefined: {0}")]
    Undefined(&'static str),
}
