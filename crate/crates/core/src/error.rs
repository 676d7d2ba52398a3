use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {0}")]
    Dimension(String),

    #[error("non-finite value at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("{}line {line}: {message}", path.as_ref().map(|p| format!("{}: ", p.display())).unwrap_or_default())]
    Parse {
        path: Option<PathBuf>,
        line: usize,
        message: String,
    },

    #[error("invalid edge set: {0}")]
    InvalidEdge(String),

    #[error("invalid parameter: {0}")]
    InvalidParam(String),

    #[error("size {n} exceeds cap {cap} for {what}")]
    SizeCap {
        what: &'static str,
        n: usize,
        cap: usize,
    },

    #[error("eigenvalue iteration did not converge (block ending at row {row})")]
    NoConvergence { row: usize },

    #[error("simplex stopped: {0}")]
    Simplex(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn parse(
        path: Option<&std::path::Path>,
        line: usize,
        message: impl Into<String>,
    ) -> Self {
        Error::Parse {
            path: path.map(|p| p.to_path_buf()),
            line,
            message: message.into(),
        }
    }

    pub(crate) fn io(path: &std::path::Path, source: std::io::Error) -> Self {
        Error::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}
