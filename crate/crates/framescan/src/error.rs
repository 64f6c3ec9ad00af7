use std::path::PathBuf;

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{}: {source}", path.display())]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("failed to decode image {}: {source}", path.display())]
    Image {
        path: PathBuf,
        #[source]
        source: image::ImageError,
    },
    #[error(transparent)]
    Core(#[from] framescan_core::Error),
    #[error("no frame_NNNNNN.png or .jpg files found in {}", .0.display())]
    EmptySource(PathBuf),
    #[error("decoder command failed ({status}): {output}")]
    Decoder { status: String, output: String },
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("failed to write json report: {0}")]
    Json(#[from] serde_json::Error),
    #[error("failed to write csv report: {0}")]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io { path: path.into(), source }
    }
}

/// A frame that could not be processed; the run carries on without it.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FrameError {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub index: Option<u64>,
    pub path: PathBuf,
    pub message: String,
}
