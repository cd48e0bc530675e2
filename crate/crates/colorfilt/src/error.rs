use std::path::PathBuf;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Core(#[from] colorfilt_core::Error),

    #[error("{path}: {source}")]
    Image { path: PathBuf, source: image::ImageError },

    #[error("{path}: unsupported pixel format {format}; expected 8-bit RGB")]
    Unsupported { path: PathBuf, format: String },

    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },

    #[error("write failed: {0}")]
    Write(#[from] std::io::Error),

    #[error("invalid JSON: {0}")]
    Json(#[from] serde_json::Error),

    #[error("invalid experiment config: {0}")]
    Config(String),
}
