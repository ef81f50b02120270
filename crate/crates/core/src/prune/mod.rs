//! Question-driven schema pruning.
//!
//! Three strategies share one retention procedure and differ only in how a
//! schema name is matched against the question:
//!
//! - [`prune_exact`]: case-insensitive equality after normalization
//!   (see [`terms`]).
//! - [`prune_ner_exact`]: same, on the question with named entities masked.
//! - [`prune_similarity`]: embedding cosine against a threshold; exact
//!   matches score 1.0.
//!
//! Retention: a matched node label keeps the node; a matched relationship type
//! keeps the relationship; a matched property keeps its owner with all of the
//! owner's properties. Relationships between two matched nodes are kept, and
//! endpoints of kept relationships are added (both recorded as
//! `endpoint-closure`). If nothing matches, the full schema is returned with a
//! single `fallback` record.

pub mod embed;
pub mod ner;
pub mod terms;

use std::collections::{BTreeSet, HashMap};

use serde::Serialize;
use thiserror::Error;

use crate::provider::ProviderError;
use crate::render::{render, RenderFormat};
use crate::schema::{GraphSchema, RelKey};
use embed::{cosine, Embedder, TrigramEmbedder};
use ner::{mask_entities, EntityRecognizer};
use terms::{exact_phrase, normalized_name, question_terms, Term};

pub const DEFAULT_SIMILARITY_THRESHOLD: f64 = 0.8;

/// Largest score a non-identical pair can reach; only identical normalized
/// strings score exactly 1.0.
const MAX_INEXACT_SCORE: f64 = 1.0 - f64::EPSILON;

#[derive(Debug, Error)]
pub enum PruneError {
    #[error("question is empty")]
    EmptyQuestion,
    #[error("entity recognizer failed on question {question:?}: {source}")]
    Recognizer {
        question: String,
        #[source]
        source: ProviderError,
    },
    #[error("entity recognizer returned invalid span {start}..{end} for question {question:?}")]
    InvalidSpan {
        question: String,
        start: usize,
        end: usize,
    },
    #[error("embedder failed on term {term:?}: {source}")]
    Embedder {
        term: String,
        #[source]
        source: ProviderError,
    },
    #[error("similarity threshold {0} is outside [0, 1]")]
    Threshold(f64),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum MatchKind {
    Exact,
    Similarity,
    EndpointClosure,
    Fallback,
}

/// A schema element a trace record points at.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
#[serde(tag = "element", rename_all = "snake_case")]
pub enum ElementRef {
    Node {
        label: String,
    },
    Relationship {
        #[serde(flatten)]
        key: RelKey,
    },
    NodeProperty {
        label: String,
        property: String,
    },
    RelationshipProperty {
        #[serde(flatten)]
        key: RelKey,
        property: String,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TraceRecord {
    /// Question phrase responsible; absent for closure and fallback records.
    pub term: Option<String>,
    /// Absent only for the fallback record, which covers the whole schema.
    #[serde(flatten)]
    pub element: Option<ElementRef>,
    pub kind: MatchKind,
    pub score: Option<f64>,
}

#[derive(Debug, Clone)]
pub struct PrunedSchema<'a> {
    retained: GraphSchema,
    origin: &'a GraphSchema,
    trace: Vec<TraceRecord>,
}

impl<'a> PrunedSchema<'a> {
    pub fn retained(&self) -> &GraphSchema {
        &self.retained
    }

    pub fn origin(&self) -> &'a GraphSchema {
        self.origin
    }

    pub fn trace(&self) -> &[TraceRecord] {
        &self.trace
    }

    pub fn into_retained(self) -> GraphSchema {
        self.retained
    }

    pub fn is_fallback(&self) -> bool {
        self.trace.iter().any(|t| t.kind == MatchKind::Fallback)
    }

    pub fn render(&self, format: RenderFormat) -> String {
        render(&self.retained, format)
    }

    pub fn retained_labels(&self) -> BTreeSet<String> {
        self.retained
            .nodes()
            .iter()
            .map(|n| n.label.clone())
            .collect()
    }

    pub fn retained_keys(&self) -> BTreeSet<RelKey> {
        self.retained
            .relationships()
            .iter()
            .map(|r| r.key())
            .collect()
    }
}

/// Outcome of matching one schema name against the question.
#[derive(Debug, Clone)]
struct Hit {
    term: String,
    score: f64,
    kind: MatchKind,
}

fn retain<'a, F>(schema: &'a GraphSchema, mut matcher: F) -> Result<PrunedSchema<'a>, PruneError>
where
    F: FnMut(&str) -> Result<Option<Hit>, PruneError>,
{
    // Names repeat across elements ("name" on many nodes); match each once.
    let mut cache: HashMap<String, Option<Hit>> = HashMap::new();
    let mut lookup = |name: &str| -> Result<Option<Hit>, PruneError> {
        if let Some(hit) = cache.get(name) {
            return Ok(hit.clone());
        }
        let hit = matcher(name)?;
        cache.insert(name.to_string(), hit.clone());
        Ok(hit)
    };

    let mut trace = Vec::new();
    let record = |hit: Hit, element: ElementRef| TraceRecord {
        term: Some(hit.term),
        element: Some(element),
        kind: hit.kind,
        score: Some(hit.score),
    };

    let mut matched_nodes = BTreeSet::new();
    for node in schema.nodes() {
        if let Some(hit) = lookup(&node.label)? {
            matched_nodes.insert(node.label.clone());
            trace.push(record(
                hit,
                ElementRef::Node {
                    label: node.label.clone(),
                },
            ));
        }
        for prop in &node.properties {
            if let Some(hit) = lookup(&prop.name)? {
                matched_nodes.insert(node.label.clone());
                trace.push(record(
                    hit,
                    ElementRef::NodeProperty {
                        label: node.label.clone(),
                        property: prop.name.clone(),
                    },
                ));
            }
        }
    }

    let mut matched_rels = BTreeSet::new();
    for rel in schema.relationships() {
        if let Some(hit) = lookup(&rel.rel_type)? {
            matched_rels.insert(rel.key());
            trace.push(record(hit, ElementRef::Relationship { key: rel.key() }));
        }
        for prop in &rel.properties {
            if let Some(hit) = lookup(&prop.name)? {
                matched_rels.insert(rel.key());
                trace.push(record(
                    hit,
                    ElementRef::RelationshipProperty {
                        key: rel.key(),
                        property: prop.name.clone(),
                    },
                ));
            }
        }
    }

    if matched_nodes.is_empty() && matched_rels.is_empty() {
        return Ok(PrunedSchema {
            retained: schema.clone(),
            origin: schema,
            trace: vec![TraceRecord {
                term: None,
                element: None,
                kind: MatchKind::Fallback,
                score: None,
            }],
        });
    }

    let closure = |element| TraceRecord {
        term: None,
        element: Some(element),
        kind: MatchKind::EndpointClosure,
        score: None,
    };
    let mut labels = matched_nodes.clone();
    let mut keys = matched_rels.clone();
    for rel in schema.relationships() {
        let key = rel.key();
        if !keys.contains(&key)
            && matched_nodes.contains(&rel.source_label)
            && matched_nodes.contains(&rel.target_label)
        {
            trace.push(closure(ElementRef::Relationship { key: key.clone() }));
            keys.insert(key);
        }
    }
    for key in &matched_rels {
        for endpoint in [&key.source_label, &key.target_label] {
            if labels.insert(endpoint.clone()) {
                trace.push(closure(ElementRef::Node {
                    label: endpoint.clone(),
                }));
            }
        }
    }

    Ok(PrunedSchema {
        retained: schema.restrict(&labels, &keys),
        origin: schema,
        trace,
    })
}

fn exact_hit(name: &str, terms: &[Term]) -> Option<Hit> {
    exact_phrase(name, terms).map(|term| Hit {
        term,
        score: 1.0,
        kind: MatchKind::Exact,
    })
}

fn prune_with_terms<'a>(schema: &'a GraphSchema, terms: &[Term]) -> PrunedSchema<'a> {
    retain(schema, |name| Ok(exact_hit(name, terms))).expect("exact matching is infallible")
}

/// Exact-match pruning. Whitespace-only questions fall back to the full schema.
pub fn prune_exact<'a>(schema: &'a GraphSchema, question: &str) -> PrunedSchema<'a> {
    prune_with_terms(schema, &question_terms(question))
}

/// Exact-match pruning on the question with entity spans masked. Entity tags
/// never act as match terms.
pub fn prune_ner_exact<'a>(
    schema: &'a GraphSchema,
    question: &str,
    recognizer: &dyn EntityRecognizer,
) -> Result<PrunedSchema<'a>, PruneError> {
    let masked = mask_entities(question, recognizer)?;
    Ok(prune_with_terms(schema, &masked.match_terms()))
}

#[derive(Clone, Copy)]
pub struct SimilarityConfig<'e> {
    threshold: f64,
    embedder: &'e dyn Embedder,
}

static BUILTIN_EMBEDDER: TrigramEmbedder = TrigramEmbedder;

impl<'e> SimilarityConfig<'e> {
    pub fn new(threshold: f64, embedder: &'e dyn Embedder) -> Result<Self, PruneError> {
        if !(0.0..=1.0).contains(&threshold) {
            return Err(PruneError::Threshold(threshold));
        }
        Ok(SimilarityConfig {
            threshold,
            embedder,
        })
    }

    pub fn threshold(&self) -> f64 {
        self.threshold
    }
}

impl SimilarityConfig<'static> {
    pub fn builtin(threshold: f64) -> Result<Self, PruneError> {
        SimilarityConfig::new(threshold, &BUILTIN_EMBEDDER)
    }
}

impl Default for SimilarityConfig<'static> {
    fn default() -> Self {
        SimilarityConfig::builtin(DEFAULT_SIMILARITY_THRESHOLD).expect("default threshold in range")
    }
}

impl std::fmt::Debug for SimilarityConfig<'_> {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("SimilarityConfig")
            .field("threshold", &self.threshold)
            .finish_non_exhaustive()
    }
}

/// Embedding-similarity pruning. A name matches when its best score against
/// any question phrase (windows of up to as many terms as the name has words)
/// reaches the threshold.
pub fn prune_similarity<'a>(
    schema: &'a GraphSchema,
    question: &str,
    config: &SimilarityConfig<'_>,
) -> Result<PrunedSchema<'a>, PruneError> {
    let terms = question_terms(question);
    let mut vectors: HashMap<String, Vec<f32>> = HashMap::new();
    let mut embed = |text: &str| -> Result<Vec<f32>, PruneError> {
        if let Some(v) = vectors.get(text) {
            return Ok(v.clone());
        }
        let v = config
            .embedder
            .embed(text)
            .map_err(|source| PruneError::Embedder {
                term: text.to_string(),
                source,
            })?;
        vectors.insert(text.to_string(), v.clone());
        Ok(v)
    };

    retain(schema, |name| {
        if let Some(hit) = exact_hit(name, &terms) {
            return Ok(Some(hit));
        }
        let target = normalized_name(name);
        if target.is_empty() {
            return Ok(None);
        }
        let target_vec = embed(&target)?;
        let width = target.split(' ').count();
        let mut best: Option<(f64, String)> = None;
        for n in 1..=width {
            for window in terms.windows(n) {
                let phrase: Vec<&str> = window.iter().map(|t| t.text.as_str()).collect();
                let phrase = phrase.join(" ");
                let score = if phrase == target {
                    1.0
                } else {
                    cosine(&embed(&phrase)?, &target_vec).min(MAX_INEXACT_SCORE)
                };
                if best.as_ref().is_none_or(|(b, _)| score > *b) {
                    best = Some((score, phrase));
                }
            }
        }
        Ok(best
            .filter(|(score, _)| *score >= config.threshold)
            .map(|(score, term)| Hit {
                term,
                score,
                kind: MatchKind::Similarity,
            }))
    })
}
