use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid lane network: {0}")]
    InvalidNetwork(String),
    #[error("network has no lanes")]
    EmptyNetwork,
    #[error("invalid map spec: {0}")]
    InvalidSpec(String),
    #[error("no agent could be placed after {attempts} attempts")]
    PlacementExhausted { attempts: usize },
    #[error("simulation horizon exceeded")]
    HorizonExceeded,
    #[error("expected {expected} actions, got {got}")]
    ActionCountMismatch { expected: usize, got: usize },
    #[error("action bin index out of range")]
    IndexOutOfRange,
    #[error("agent {0} is inactive")]
    InactiveAgent(usize),
    #[error("shape mismatch: expected {expected}, got {got}")]
    ShapeMismatch { expected: usize, got: usize },
    #[error("no valid timesteps in feature series")]
    NoValidSteps,
    #[error("no agents to evaluate")]
    NoAgents,
    #[error("rollout/log agent ids do not match")]
    IdMismatch,
    #[error("log-replay protocol requires logged rollouts")]
    MissingLogs,
    #[error("non-finite loss: {0}")]
    NonFiniteLoss(String),
    #[error("checkpoint format error: {0}")]
    CheckpointFormat(String),
    #[error("pipeline stage `{stage}` failed: {message}")]
    Stage { stage: String, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}
