use crate::model::PlayerId;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid rational {0:?}")]
    InvalidRational(String),

    #[error("invalid distribution: {0}")]
    InvalidPmf(String),

    #[error("invalid instance: {0}")]
    InvalidInstance(String),

    #[error("unknown player {0}")]
    UnknownPlayer(PlayerId),

    #[error("no distribution for player {0}")]
    MissingDistribution(PlayerId),

    #[error("invalid realization: {0}")]
    InvalidRealization(String),

    #[error("no realization for assigned player {0}")]
    MissingRealization(PlayerId),

    #[error("{what} has {n} players, above the limit of {cap}")]
    CapExceeded { what: &'static str, n: usize, cap: usize },

    #[error("invalid scenario: {0}")]
    InvalidScenario(String),

    #[error("infeasible scenario: {0}")]
    Infeasible(String),

    #[error("empty misreport family")]
    EmptyFamily,

    #[error("invalid configuration: {0}")]
    InvalidConfig(String),

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::CapExceeded { .. } => 2,
            _ => 1,
        }
    }
}
