use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("a game needs at least one user besides the aggregator")]
    NoUsers,
    #[error("{n_players} players exceed the enumeration cap of {cap}")]
    TooManyPlayers { n_players: usize, cap: usize },
    #[error("{operation} is limited to {limit} players (got {n_players})")]
    SizeGuard {
        operation: &'static str,
        n_players: usize,
        limit: usize,
    },
    #[error("user index {index} out of range for a game with {n_users} users")]
    PlayerOutOfRange { index: usize, n_users: usize },
    #[error("coalition bits {bits:#b} out of range for a game with {n_users} users")]
    CoalitionOutOfRange { bits: u32, n_users: usize },
    #[error("coalition from a game with {found} users used with a game of {expected} users")]
    MismatchedGame { expected: usize, found: usize },
    #[error("value table has {found} entries, expected {expected}")]
    TableSize { expected: usize, found: usize },
    #[error("allocation has {found} payoffs, expected {expected}")]
    AllocationLength { expected: usize, found: usize },
    #[error("invalid instance: {0}")]
    InvalidInstance(String),
    #[error("not applicable: {0}")]
    NotApplicable(String),
    #[error("internal consistency check failed: {0}")]
    Inconsistency(String),
}

pub type Result<T> = std::result::Result<T, Error>;
