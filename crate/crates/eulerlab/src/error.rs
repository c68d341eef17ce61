use eulerlab_core::eulercocycle::CocycleError;
use eulerlab_core::extensions::ExtError;
use eulerlab_core::ivanovturaev::ItError;
use eulerlab_core::lifts::LiftError;
use eulerlab_core::quasimorphism::QuasiError;
use eulerlab_core::surfacereps::RepError;
use eulerlab_core::words::WordError;

/// Everything that can go wrong before a result is produced. All of these
/// are input errors (exit code 1).
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// A file could not be read.
    #[error("cannot read {path}: {source}")]
    Io {
        /// The file.
        path: String,
        /// Cause.
        source: std::io::Error,
    },
    /// Input does not match the expected format.
    #[error("schema error at {location}: {message}")]
    Schema {
        /// Where the problem is.
        location: String,
        /// What is wrong.
        message: String,
    },
    /// Bad option value.
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    /// Lift construction or rotation-number failure.
    #[error(transparent)]
    Lift(#[from] LiftError),
    /// Representation failure.
    #[error(transparent)]
    Rep(#[from] RepError),
    /// Word failure.
    #[error(transparent)]
    Word(#[from] WordError),
    /// Quasimorphism failure.
    #[error(transparent)]
    Quasi(#[from] QuasiError),
    /// Extension failure.
    #[error(transparent)]
    Ext(#[from] ExtError),
    /// Ivanov-Turaev failure.
    #[error(transparent)]
    It(#[from] ItError),
    /// Cocycle failure.
    #[error(transparent)]
    Cocycle(#[from] CocycleError),
}

impl CliError {
    /// Short machine-readable tag.
    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Io { .. } => "io",
            CliError::Schema { .. } => "schema",
            CliError::InvalidArgument(_) => "invalid_argument",
            CliError::Rep(RepError::NotARepresentation { .. }) => "not_a_representation",
            CliError::Lift(_) => "lift",
            CliError::Rep(_) => "representation",
            CliError::Word(_) => "word",
            CliError::Quasi(_) => "quasimorphism",
            CliError::Ext(_) => "extension",
            CliError::It(_) => "ivanov_turaev",
            CliError::Cocycle(_) => "cocycle",
        }
    }
}
