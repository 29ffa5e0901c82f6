//! Command-line driver, file formats and acceptance batteries on top of
//! [`kilab_core`].

pub mod battery;
pub mod cli;
pub mod config;
pub mod format;
pub mod meta;
pub mod reports;
pub mod suite;
pub mod sweep;

use std::path::{Path, PathBuf};

pub use config::ConfigError;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error(transparent)]
    Config(#[from] ConfigError),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Core(#[from] kilab_core::Error),
    #[error("invalid input: {0}")]
    Input(String),
    #[error("usage: {0}")]
    Usage(String),
}

impl Error {
    pub fn io(path: &Path, source: std::io::Error) -> Self {
        Error::Io { path: path.to_path_buf(), source }
    }

    /// Process exit status: 2 for anything the caller got wrong, 1 for
    /// numerical failures.
    pub fn exit_code(&self) -> i32 {
        use kilab_core::Error as E;
        match self {
            Error::Core(
                E::KadecViolation { .. }
                | E::BadH(_)
                | E::BadParameter(_)
                | E::BadWindow
                | E::BadSweep
                | E::SmoothnessExceeded { .. }
                | E::NotIncreasing { .. }
                | E::WindowTooSmall { .. },
            ) => 2,
            Error::Core(_) => 1,
            _ => 2,
        }
    }
}
