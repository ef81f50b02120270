use std::fmt;

use schema_scalpel::prompt::{CostError, PromptError};
use schema_scalpel::{DatasetError, ProviderError, PruneError, SchemaError};

/// Process exit statuses.
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_PROVIDER: i32 = 3;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Input(String),
    Provider(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => EXIT_USAGE,
            CliError::Input(_) => EXIT_INPUT,
            CliError::Provider(_) => EXIT_PROVIDER,
        }
    }

    pub fn input(msg: impl fmt::Display) -> Self {
        CliError::Input(msg.to_string())
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(m) | CliError::Input(m) | CliError::Provider(m) => f.write_str(m),
        }
    }
}

impl From<ProviderError> for CliError {
    fn from(e: ProviderError) -> Self {
        match e {
            ProviderError::InvalidInput(_) => CliError::Input(e.to_string()),
            _ => CliError::Provider(e.to_string()),
        }
    }
}

impl From<PruneError> for CliError {
    fn from(e: PruneError) -> Self {
        match e {
            PruneError::Recognizer { .. } | PruneError::Embedder { .. } => {
                CliError::Provider(e.to_string())
            }
            PruneError::Threshold(_) => CliError::Usage(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<PromptError> for CliError {
    fn from(e: PromptError) -> Self {
        match e {
            PromptError::Tokenizer(p) => p.into(),
            PromptError::EmptyInput(_) => CliError::Input(e.to_string()),
        }
    }
}

impl From<SchemaError> for CliError {
    fn from(e: SchemaError) -> Self {
        CliError::input(e)
    }
}

impl From<DatasetError> for CliError {
    fn from(e: DatasetError) -> Self {
        CliError::input(e)
    }
}

impl From<CostError> for CliError {
    fn from(e: CostError) -> Self {
        CliError::input(e)
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::input(e)
    }
}

/// Worst exit status over a batch: provider failures outrank input failures.
#[derive(Debug, Default)]
pub struct BatchStatus {
    pub input_failures: usize,
    pub provider_failures: usize,
}

impl BatchStatus {
    pub fn record(&mut self, e: &CliError) {
        match e {
            CliError::Provider(_) => self.provider_failures += 1,
            _ => self.input_failures += 1,
        }
    }

    pub fn failures(&self) -> usize {
        self.input_failures + self.provider_failures
    }

    pub fn exit_code(&self) -> i32 {
        if self.provider_failures > 0 {
            EXIT_PROVIDER
        } else if self.input_failures > 0 {
            EXIT_INPUT
        } else {
            0
        }
    }
}
