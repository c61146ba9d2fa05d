use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("LevelOverflow: cyclotomic level {level} exceeds the cap {cap}")]
    LevelOverflow { level: u64, cap: u64 },

    #[error("LevelMismatch: level {from} does not divide {to}")]
    LevelMismatch { from: u64, to: u64 },

    #[error("DivisionByZero: {0}")]
    DivisionByZero(&'static str),

    #[error("NotRational: element has irrational part at level {level}")]
    NotRational { level: u64 },

    #[error("DimensionMismatch: expected {expected}, got {got}")]
    DimensionMismatch { expected: usize, got: usize },

    #[error("NotCoprime: factor groups share the root phase {phase}")]
    NotCoprime { phase: String },

    #[error("UnsupportedMultiplePole: {0}")]
    UnsupportedMultiplePole(String),

    #[error("NotPointed: {0}")]
    NotPointed(String),

    #[error("SanityFailure: {0}")]
    SanityFailure(String),

    #[error("InvalidInput: {0}")]
    InvalidInput(String),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::NotPointed(_) => 2,
            Error::UnsupportedMultiplePole(_) => 3,
            Error::InvalidInput(_) | Error::DimensionMismatch { .. } => 4,
            Error::LevelOverflow { .. } => 6,
            Error::LevelMismatch { .. }
            | Error::DivisionByZero(_)
            | Error::NotRational { .. }
            | Error::NotCoprime { .. }
            | Error::SanityFailure(_) => 5,
        }
    }

    /// Short machine-greppable name of the variant.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::LevelOverflow { .. } => "LevelOverflow",
            Error::LevelMismatch { .. } => "LevelMismatch",
            Error::DivisionByZero(_) => "DivisionByZero",
            Error::NotRational { .. } => "NotRational",
            Error::DimensionMismatch { .. } => "DimensionMismatch",
            Error::NotCoprime { .. } => "NotCoprime",
            Error::UnsupportedMultiplePole(_) => "UnsupportedMultiplePole",
            Error::NotPointed(_) => "NotPointed",
            Error::SanityFailure(_) => "SanityFailure",
            Error::InvalidInput(_) => "InvalidInput",
        }
    }
}
