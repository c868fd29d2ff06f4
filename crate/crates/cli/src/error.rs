use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("input file not found: {0}")]
    MissingFile(PathBuf),
    #[error("column not found in header: {0}")]
    MissingColumn(String),
    #[error("zero retained rows")]
    NoRows,
    #[error("invalid input: {0}")]
    Input(String),
    #[error("{stage}: {source}")]
    Compute {
        stage: String,
        #[source]
        source: depthkit::Error,
    },
    #[error("nothing to do")]
    NothingToDo,
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    /// Process exit code: 2 for input problems, 3 for computation failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Compute { .. } => 3,
            _ => 2,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;

/// Tags a core error with the stage that produced it.
pub trait Stage<T> {
    fn stage(self, name: &str) -> CliResult<T>;
}

impl<T> Stage<T> for depthkit::Result<T> {
    fn stage(self, name: &str) -> CliResult<T> {
        self.map_err(|source| CliError::Compute {
            stage: name.to_string(),
            source,
        })
    }
}
