use linearize::LinError;
use obstruction::TowerError;
use thiserror::Error;
use webgeom::WebError;

/// Exit status for a decisive answer.
pub const EXIT_DECISIVE: i32 = 0;
/// Exit status when the numerics could not settle the question.
pub const EXIT_INCONCLUSIVE: i32 = 2;
/// Exit status for unusable input: bad flags, expressions or points.
pub const EXIT_INPUT: i32 = 3;
/// Exit status when the obstruction tower cannot be built, loaded or evaluated.
pub const EXIT_TOWER: i32 = 4;
/// Exit status when a field integration aborts.
pub const EXIT_INTEGRATION: i32 = 5;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error(transparent)]
    Web(#[from] WebError),
    #[error(transparent)]
    Tower(#[from] TowerError),
    #[error(transparent)]
    Integration(#[from] LinError),
    #[error("internal invariant violated: {0}")]
    Internal(String),
    #[error("io: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) | CliError::Web(_) | CliError::Io(_) => EXIT_INPUT,
            CliError::Tower(_) | CliError::Internal(_) => EXIT_TOWER,
            CliError::Integration(_) => EXIT_INTEGRATION,
        }
    }

    /// The pipeline stage named in a report's error stanza.
    pub fn stage(&self) -> &'static str {
        match self {
            CliError::Input(_) | CliError::Web(_) | CliError::Io(_) => "input",
            CliError::Tower(_) => "tower",
            CliError::Internal(_) => "internal",
            CliError::Integration(_) => "integration",
        }
    }
}
