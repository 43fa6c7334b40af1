use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("invalid state: {0}")]
    InvalidState(String),

    #[error("malformed response: {0}")]
    MalformedResponse(String),

    #[error("backend unavailable: {0}")]
    BackendUnavailable(String),

    #[error("prompt structure error: {0}")]
    PromptStructure(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
