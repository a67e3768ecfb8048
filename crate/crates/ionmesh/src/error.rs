//! Crate-level error type wrapping geometry and I/O failures.

use std::path::PathBuf;

use ionmesh_core::GeomError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("{0}")]
    Geom(#[from] GeomError),

    #[error("Io: {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error("Parse: {path}:{line}: {message}")]
    Parse { path: PathBuf, line: usize, message: String },

    #[error("MissingRegionAttribute: {path}: .ele file carries no region attribute column")]
    MissingRegionAttribute { path: PathBuf },

    #[error("InconsistentPair: {0}")]
    InconsistentPair(String),

    #[error("NonManifoldInput: {path}: surface has {boundary} boundary and {non_manifold} non-manifold edges")]
    NonManifoldInput { path: PathBuf, boundary: usize, non_manifold: usize },

    #[error("SeedPlacement: {0}")]
    SeedPlacement(String),

    #[error("Config: {0}")]
    Config(String),

    #[error("Tetgen: {0}")]
    Tetgen(String),

    #[error("Json: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    pub fn io(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> Error {
        let path = path.into();
        move |source| Error::Io { path, source }
    }

    pub fn parse(path: impl Into<PathBuf>, line: usize, message: impl Into<String>) -> Error {
        Error::Parse { path: path.into(), line, message: message.into() }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
