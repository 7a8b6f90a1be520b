use thiserror::Error;

use crate::game::{Player, Rank};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum Error {
    #[error("rank must be a positive integer, got {0}")]
    InvalidRank(u64),
    #[error("rank {0} appears more than once in a hand")]
    DuplicateRank(Rank),
    #[error("rank {0} is held by both players")]
    Overlap(Rank),
    #[error("could not parse position {input:?}: {reason}")]
    Parse { input: String, reason: String },
    #[error("{player} does not hold card {rank}")]
    CardNotHeld { player: Player, rank: Rank },
    #[error("position is terminal: a hand is already empty")]
    TerminalPosition,
    #[error("both hands are empty")]
    BothEmpty,
    #[error("strategy {name:?} chose card {rank}, which {player} does not hold")]
    Strategy { name: String, player: Player, rank: Rank },
    #[error("game still running after {0} rounds")]
    RoundLimitExceeded(usize),
    #[error("{live} live cards exceed the supported maximum of {cap}")]
    CapacityExceeded { live: usize, cap: usize },
    #[error("{0} has no winning strategy in this position")]
    NotWinning(Player),
    #[error("neither the many-cards nor the high-cards criterion applies to {0}")]
    LemmaNotApplicable(Player),
    #[error("phase invariant violated: {0}")]
    InvariantViolated(String),
    #[error("interval counts have different lengths ({alice} vs {bob})")]
    LengthMismatch { alice: usize, bob: usize },
    #[error("invalid interval count k = {k} for n = {n}")]
    InvalidK { k: u64, n: u64 },
    #[error("invalid trial count {0}")]
    InvalidTrials(u64),
    #[error("invalid deal model: {0}")]
    InvalidModel(String),
    #[error("table cache: {0}")]
    Cache(String),
    #[error("i/o: {0}")]
    Io(String),
}

impl From<std::io::Error> for Error {
    fn from(err: std::io::Error) -> Self {
        Error::Io(err.to_string())
    }
}

pub type Result<T> = std::result::Result<T, Error>;
