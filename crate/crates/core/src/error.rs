use thiserror::Error;

/// Errors raised across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("unknown graph name `{0}`")]
    UnknownGraph(String),
    #[error("invalid parameters: {0}")]
    InvalidParameters(String),
    #[error("graph has {n} vertices, limit is {limit}")]
    TooManyVertices { n: usize, limit: usize },
    #[error("graph is empty")]
    EmptyGraph,
    #[error("line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid goal: {0}")]
    InvalidGoal(String),
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("game is over")]
    GameOver,
    #[error("illegal move: {0}")]
    IllegalMove(String),
    #[error("resource cap exceeded: {0}")]
    ResourceCap(String),
    #[error("{0} does not win this position")]
    NotWinner(crate::game::Player),
    #[error("script `{script}` failed after {history_len} actions: {msg}")]
    Script {
        script: String,
        msg: String,
        history_len: usize,
    },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("invalid pairing: {0}")]
    InvalidPairing(String),
    #[error("invalid sample spec: {0}")]
    InvalidSpec(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
