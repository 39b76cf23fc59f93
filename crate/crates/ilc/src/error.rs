use std::io;
use std::path::PathBuf;

use ilc_core::{CodecError, PlaneError};

#[derive(Debug, thiserror::Error)]
pub enum IlcError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: io::Error },
    #[error("{0}")]
    Format(String),
    #[error("{0}")]
    Table(String),
    #[error("no PGM images in {}", .0.display())]
    EmptyCorpus(PathBuf),
    #[error(transparent)]
    Codec(#[from] CodecError),
    #[error(transparent)]
    Plane(#[from] PlaneError),
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl IlcError {
    pub(crate) fn io(path: impl Into<PathBuf>, source: io::Error) -> Self {
        IlcError::Io { path: path.into(), source }
    }
}

pub type Result<T, E = IlcError> = std::result::Result<T, E>;
