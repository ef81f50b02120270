//! Translation-based (GLEU) and execution-based (ExactMatch) evaluation of
//! generated Cypher.

pub mod exact;
pub mod gleu;
pub mod postprocess;

use serde::Serialize;
use thiserror::Error;

use crate::dataset::ResultSet;
use crate::provider::ProviderError;
pub use exact::exact_match;
pub use gleu::{corpus_gleu, gleu, GleuCounts, GleuError, DEFAULT_MAX_ORDER};
pub use postprocess::postprocess_cypher;

#[derive(Debug, Error, PartialEq, Eq)]
pub enum EvalError {
    #[error("nothing to evaluate")]
    EmptyCorpus,
    #[error("pair {index}: {source}")]
    Pair {
        index: usize,
        #[source]
        source: GleuError,
    },
}

/// Runs a query against the database identified by `schema_id`.
pub trait QueryExecutor: Send + Sync {
    fn execute(&self, schema_id: &str, cypher: &str) -> Result<ResultSet, ProviderError>;
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct EvalPair {
    pub candidate: String,
    pub reference: String,
    pub candidate_result: Option<ResultSet>,
    pub reference_result: Option<ResultSet>,
    /// The candidate could not be executed; scores ExactMatch 0 when the
    /// reference result is known.
    pub candidate_failed: bool,
}

impl EvalPair {
    pub fn new(candidate: impl Into<String>, reference: impl Into<String>) -> Self {
        EvalPair {
            candidate: candidate.into(),
            reference: reference.into(),
            candidate_result: None,
            reference_result: None,
            candidate_failed: false,
        }
    }

    pub fn with_results(mut self, candidate: ResultSet, reference: ResultSet) -> Self {
        self.candidate_result = Some(candidate);
        self.reference_result = Some(reference);
        self
    }

    pub fn with_failed_candidate(mut self, reference: ResultSet) -> Self {
        self.candidate_result = None;
        self.reference_result = Some(reference);
        self.candidate_failed = true;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct PairScore {
    pub gleu: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub exact_match: Option<f64>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalReport {
    pub gleu: f64,
    /// Mean over pairs carrying both result sets; absent when none do.
    pub exact_match: Option<f64>,
    pub n: usize,
    pub per_pair: Vec<PairScore>,
}

/// Post-processes each candidate, then scores corpus GLEU over all pairs and
/// ExactMatch over the pairs that carry both result sets.
pub fn evaluate_corpus(pairs: &[EvalPair]) -> Result<EvalReport, EvalError> {
    if pairs.is_empty() {
        return Err(EvalError::EmptyCorpus);
    }
    let mut pooled = GleuCounts::default();
    let mut per_pair = Vec::with_capacity(pairs.len());
    let (mut em_sum, mut em_n) = (0.0, 0usize);
    for (index, pair) in pairs.iter().enumerate() {
        let candidate = postprocess_cypher(&pair.candidate);
        let counts = gleu::gleu_counts(&candidate, &pair.reference, DEFAULT_MAX_ORDER)
            .map_err(|source| EvalError::Pair { index, source })?;
        pooled += counts;
        let em = match (&pair.candidate_result, &pair.reference_result) {
            (None, Some(_)) if pair.candidate_failed => {
                em_n += 1;
                Some(0.0)
            }
            (Some(c), Some(r)) => {
                let score = exact_match(c, r);
                em_sum += score;
                em_n += 1;
                Some(score)
            }
            _ => None,
        };
        per_pair.push(PairScore {
            gleu: counts.score(),
            exact_match: em,
        });
    }
    Ok(EvalReport {
        gleu: pooled.score(),
        exact_match: (em_n > 0).then(|| em_sum / em_n as f64),
        n: pairs.len(),
        per_pair,
    })
}
