//! Pluggable provider plumbing shared by the NER, embedding, tokenizer and
//! executor interfaces.

use std::time::Duration;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum ProviderError {
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("adapter `{program}`: {message}")]
    Adapter { program: String, message: String },
    #[error("adapter `{program}` did not answer within {timeout:?}")]
    Timeout { program: String, timeout: Duration },
    #[error("adapter i/o: {0}")]
    Io(#[from] std::io::Error),
}
