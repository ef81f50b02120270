//! Graph-schema handling for Text2Cypher prompting.
//!
//! - [`schema`]: schema model, canonical JSON ingestion and output.
//! - [`render`]: Enhanced and Base schema text layouts.
//! - [`prune`]: exact-match, NER-masked and similarity pruning against a
//!   question.
//! - [`prompt`]: instruction template, token counting, token statistics and
//!   cost estimation.
//! - [`eval`]: output post-processing, GLEU and execution ExactMatch.
//! - [`adapter`]: newline-delimited JSON subprocess providers.

pub mod adapter;
pub mod dataset;
pub mod eval;
pub mod prompt;
pub mod provider;
pub mod prune;
pub mod render;
pub mod schema;

pub use dataset::{load_dataset, DatasetError, DatasetRecord, ResultSet};
pub use provider::ProviderError;
pub use prune::{
    prune_exact, prune_ner_exact, prune_similarity, MatchKind, PruneError, PrunedSchema,
    SimilarityConfig, TraceRecord,
};
pub use render::{render, RenderFormat};
pub use schema::{
    load_schema, save_schema, GraphSchema, NodeSpec, PropertySpec, RelKey, RelationshipSpec,
    SchemaCollection, SchemaError, ValueType,
};
