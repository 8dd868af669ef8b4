use qutrit_geom::Error as GeomError;
use thiserror::Error;

/// Failures of a command, each mapped to a process exit code.
#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error("malformed input: {0}")]
    Input(String),
    #[error(transparent)]
    Geometry(#[from] GeomError),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("{0}")]
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            Self::Usage(_) => 2,
            Self::Input(_) => 4,
            Self::Geometry(e) => match e {
                GeomError::OutOfRange { .. }
                | GeomError::InvalidStep { .. }
                | GeomError::InvalidSchedule(_)
                | GeomError::TooFewSamples { .. } => 2,
                GeomError::OrthogonalEndpoints { .. }
                | GeomError::OrthogonalStates { .. }
                | GeomError::OrthogonalConsecutive { .. }
                | GeomError::OrthogonalPair { .. }
                | GeomError::CoincidentEndpoints
                | GeomError::DegenerateTriangle { .. } => 3,
                GeomError::NotNormalized { .. } | GeomError::NotOnO { .. } => 4,
                _ => 5,
            },
            Self::Io(_) | Self::Failed(_) => 5,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;
