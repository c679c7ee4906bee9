use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] aklt_negativity::Error),

    #[error("cannot write {}: {source}", path.display())]
    Output { path: PathBuf, source: std::io::Error },

    #[error("{failed} of {total} rows differ from the oracle by more than {tol:e}")]
    Mismatch { failed: usize, total: usize, tol: f64 },

    #[error("serialization failed: {0}")]
    Serialize(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        use aklt_negativity::Error as E;
        match self {
            CliError::Usage(_) | CliError::Output { .. } => 2,
            CliError::Mismatch { .. } => 3,
            CliError::Core(
                E::EdgeIndexOutOfRange(_)
                | E::NegativeLength(_)
                | E::DecayOutOfRange(_)
                | E::DegenerateRingNorm(_)
                | E::InvalidGeometry(_)
                | E::ZeroBoundaryWeights
                | E::DimensionCap { .. }
                | E::InvalidSites(_)
                | E::UnknownClosedForm(_)
                | E::Parse(_),
            ) => 2,
            CliError::Core(_) | CliError::Serialize(_) => 1,
        }
    }
}

pub type Result<T> = std::result::Result<T, CliError>;
