use thiserror::Error;

pub type Result<T, E = EngineError> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum EngineError {
    #[error("unknown task `{0}`")]
    UnknownTask(String),

    #[error("unknown difficulty `{0}`")]
    UnknownDifficulty(String),

    #[error("grammar mismatch at position {position}: {message}")]
    Grammar { position: usize, message: String },

    #[error("malformed payload for {task}: {message}")]
    InvalidPayload { task: &'static str, message: String },

    #[error("baseline value is zero on a maximization task")]
    DegenerateBaseline,

    #[error("unknown instance id `{0}`")]
    UnknownInstance(String),

    #[error("duplicate response for instance `{0}`")]
    DuplicateResponse(String),

    #[error("invalid mix: {0}")]
    InvalidMix(String),

    #[error("task count {0} outside 1..=10")]
    TaskCountOutOfRange(usize),

    #[error("line {line}: {message}")]
    MalformedRecord { line: usize, message: String },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

impl EngineError {
    pub(crate) fn payload(task: &'static str, message: impl Into<String>) -> Self {
        EngineError::InvalidPayload {
            task,
            message: message.into(),
        }
    }

    /// True for errors caused by bad input rather than the environment.
    pub fn is_validation(&self) -> bool {
        !matches!(self, EngineError::Io(_))
    }
}
