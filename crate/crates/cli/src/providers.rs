//! `builtin` or `adapter:<path>` provider selection.

use std::path::PathBuf;
use std::str::FromStr;

use schema_scalpel::adapter::AdapterProcess;
use schema_scalpel::eval::QueryExecutor;
use schema_scalpel::prompt::{ClassTokenizer, Tokenizer};
use schema_scalpel::prune::embed::{Embedder, TrigramEmbedder};
use schema_scalpel::prune::ner::{EntityRecognizer, RuleBasedRecognizer};

use crate::error::CliError;

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ProviderSpec {
    Builtin,
    Adapter(PathBuf),
}

impl FromStr for ProviderSpec {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        if s == "builtin" {
            return Ok(ProviderSpec::Builtin);
        }
        match s.strip_prefix("adapter:") {
            Some(path) if !path.is_empty() => Ok(ProviderSpec::Adapter(PathBuf::from(path))),
            _ => Err(format!("expected `builtin` or `adapter:<path>`, got `{s}`")),
        }
    }
}

fn spawn(path: &PathBuf) -> Result<AdapterProcess, CliError> {
    AdapterProcess::spawn(path).map_err(CliError::from)
}

pub fn tokenizer(spec: &ProviderSpec) -> Result<Box<dyn Tokenizer>, CliError> {
    Ok(match spec {
        ProviderSpec::Builtin => Box::new(ClassTokenizer),
        ProviderSpec::Adapter(p) => Box::new(spawn(p)?),
    })
}

pub fn recognizer(spec: &ProviderSpec) -> Result<Box<dyn EntityRecognizer>, CliError> {
    Ok(match spec {
        ProviderSpec::Builtin => Box::new(RuleBasedRecognizer),
        ProviderSpec::Adapter(p) => Box::new(spawn(p)?),
    })
}

pub fn embedder(spec: &ProviderSpec) -> Result<Box<dyn Embedder>, CliError> {
    Ok(match spec {
        ProviderSpec::Builtin => Box::new(TrigramEmbedder),
        ProviderSpec::Adapter(p) => Box::new(spawn(p)?),
    })
}

/// There is no built-in database; only adapters execute queries.
pub fn executor(spec: &ProviderSpec) -> Result<Option<Box<dyn QueryExecutor>>, CliError> {
    Ok(match spec {
        ProviderSpec::Builtin => None,
        ProviderSpec::Adapter(p) => Some(Box::new(spawn(p)?)),
    })
}
