use ballmap::Error;
use thiserror::Error as ThisError;

#[derive(Debug, ThisError)]
pub enum CliError {
    #[error("cannot access {path}: {source}")]
    Io { path: String, source: std::io::Error },

    #[error("cannot parse {path}: {source}")]
    Parse { path: String, source: serde_json::Error },

    #[error("cannot render report: {0}")]
    Render(#[from] serde_json::Error),

    #[error(transparent)]
    Library(#[from] Error),
}

impl CliError {
    pub fn code(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Parse { .. } => "parse",
            CliError::Render(_) => "render",
            CliError::Library(e) => e.code(),
        }
    }

    /// 1 when a mathematical property fails, 2 for bad input, 3 for
    /// numerical trouble.
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Library(e) if e.is_numerical() => 3,
            CliError::Library(
                Error::LinearMap
                | Error::NotNormalForm(_)
                | Error::NotLowestTerms
                | Error::NotPositiveSemidefinite { .. }
                | Error::ConstructionFailed(_),
            ) => 1,
            _ => 2,
        }
    }
}
