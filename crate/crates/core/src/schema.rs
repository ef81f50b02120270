//! Graph schema data model plus ingestion and canonical serialization of
//! schema documents.
//!
//! A [`GraphSchema`] is always held in canonical order: nodes sorted by label,
//! relationships by `(type, source, target)`, properties by name. Every
//! constructor validates referential closure and uniqueness, so a value of
//! this type is valid by construction.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Read;

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Maximum number of sample values kept per property at ingestion.
pub const MAX_INGESTED_SAMPLES: usize = 10;

#[derive(Debug, Error)]
pub enum SchemaError {
    #[error("parse error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    #[error("relationship ({source_label})-[:{rel_type}]->({target_label}) references undefined node label `{missing}`")]
    UnknownEndpoint {
        rel_type: String,
        source_label: String,
        target_label: String,
        missing: String,
    },
    #[error("duplicate node label `{0}`")]
    DuplicateLabel(String),
    #[error("duplicate relationship ({source_label})-[:{rel_type}]->({target_label})")]
    DuplicateRelationship {
        rel_type: String,
        source_label: String,
        target_label: String,
    },
    #[error("duplicate property `{name}` on {owner}")]
    DuplicateProperty { owner: String, name: String },
    #[error("empty {what}")]
    EmptyName { what: String },
    #[error("empty sample value for property `{property}` on {owner}")]
    EmptySample { owner: String, property: String },
    #[error("failed to read schema: {0}")]
    Io(#[from] std::io::Error),
}

impl SchemaError {
    fn from_json(err: serde_json::Error) -> Self {
        // serde_json appends " at line L column C"; the position is kept separately.
        let full = err.to_string();
        let suffix = format!(" at line {} column {}", err.line(), err.column());
        let message = full.strip_suffix(&suffix).unwrap_or(&full).to_string();
        SchemaError::Parse {
            line: err.line(),
            column: err.column(),
            message,
        }
    }
}

/// Scalar kinds a property may hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ValueType {
    String,
    Integer,
    Float,
    Boolean,
    Date,
    DateTime,
    Point,
    List,
}

impl ValueType {
    pub fn as_str(self) -> &'static str {
        match self {
            ValueType::String => "STRING",
            ValueType::Integer => "INTEGER",
            ValueType::Float => "FLOAT",
            ValueType::Boolean => "BOOLEAN",
            ValueType::Date => "DATE",
            ValueType::DateTime => "DATE_TIME",
            ValueType::Point => "POINT",
            ValueType::List => "LIST",
        }
    }

    /// Parses a type name leniently. Returns `None` for unknown kinds.
    pub fn parse(raw: &str) -> Option<Self> {
        let key: String = raw
            .chars()
            .filter(|c| !matches!(c, '_' | ' ' | '-'))
            .flat_map(char::to_uppercase)
            .collect();
        let kind = match key.as_str() {
            "STRING" | "STR" | "TEXT" => ValueType::String,
            "INTEGER" | "INT" | "LONG" => ValueType::Integer,
            "FLOAT" | "DOUBLE" => ValueType::Float,
            "BOOLEAN" | "BOOL" => ValueType::Boolean,
            "DATE" => ValueType::Date,
            "DATETIME" | "LOCALDATETIME" | "ZONEDDATETIME" => ValueType::DateTime,
            "POINT" => ValueType::Point,
            k if k.starts_with("LIST") => ValueType::List,
            _ => return None,
        };
        Some(kind)
    }
}

impl fmt::Display for ValueType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PropertySpec {
    pub name: String,
    pub value_type: ValueType,
    pub samples: Vec<String>,
}

impl PropertySpec {
    pub fn new(name: impl Into<String>, value_type: ValueType) -> Self {
        PropertySpec {
            name: name.into(),
            value_type,
            samples: Vec::new(),
        }
    }

    pub fn with_samples<I, S>(mut self, samples: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        self.samples = samples.into_iter().map(Into::into).collect();
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct NodeSpec {
    pub label: String,
    pub properties: Vec<PropertySpec>,
}

impl NodeSpec {
    pub fn new(label: impl Into<String>, properties: Vec<PropertySpec>) -> Self {
        NodeSpec {
            label: label.into(),
            properties,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RelationshipSpec {
    pub rel_type: String,
    pub source_label: String,
    pub target_label: String,
    pub properties: Vec<PropertySpec>,
}

impl RelationshipSpec {
    pub fn new(
        rel_type: impl Into<String>,
        source_label: impl Into<String>,
        target_label: impl Into<String>,
        properties: Vec<PropertySpec>,
    ) -> Self {
        RelationshipSpec {
            rel_type: rel_type.into(),
            source_label: source_label.into(),
            target_label: target_label.into(),
            properties,
        }
    }

    pub fn key(&self) -> RelKey {
        RelKey {
            rel_type: self.rel_type.clone(),
            source_label: self.source_label.clone(),
            target_label: self.target_label.clone(),
        }
    }

    /// `(:Src)-[:TYPE]->(:Tgt)`
    pub fn pattern(&self) -> String {
        format!(
            "(:{})-[:{}]->(:{})",
            self.source_label, self.rel_type, self.target_label
        )
    }
}

/// Identity of a relationship within a schema. Orders by type, then source,
/// then target, which is the canonical relationship order.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct RelKey {
    #[serde(rename = "type")]
    pub rel_type: String,
    #[serde(rename = "source")]
    pub source_label: String,
    #[serde(rename = "target")]
    pub target_label: String,
}

impl fmt::Display for RelKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "(:{})-[:{}]->(:{})",
            self.source_label, self.rel_type, self.target_label
        )
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct GraphSchema {
    nodes: Vec<NodeSpec>,
    relationships: Vec<RelationshipSpec>,
}

impl GraphSchema {
    pub fn empty() -> Self {
        GraphSchema::default()
    }

    /// Validates and canonicalizes. Input order is irrelevant.
    pub fn new(
        mut nodes: Vec<NodeSpec>,
        mut relationships: Vec<RelationshipSpec>,
    ) -> Result<Self, SchemaError> {
        let mut labels = BTreeSet::new();
        for node in &mut nodes {
            if node.label.is_empty() {
                return Err(SchemaError::EmptyName {
                    what: "node label".into(),
                });
            }
            if !labels.insert(node.label.clone()) {
                return Err(SchemaError::DuplicateLabel(node.label.clone()));
            }
            canonicalize_properties(&mut node.properties, || format!("node `{}`", node.label))?;
        }

        let mut triples = BTreeSet::new();
        for rel in &mut relationships {
            if rel.rel_type.is_empty() {
                return Err(SchemaError::EmptyName {
                    what: "relationship type".into(),
                });
            }
            for endpoint in [&rel.source_label, &rel.target_label] {
                if !labels.contains(endpoint) {
                    return Err(SchemaError::UnknownEndpoint {
                        rel_type: rel.rel_type.clone(),
                        source_label: rel.source_label.clone(),
                        target_label: rel.target_label.clone(),
                        missing: endpoint.clone(),
                    });
                }
            }
            if !triples.insert(rel.key()) {
                return Err(SchemaError::DuplicateRelationship {
                    rel_type: rel.rel_type.clone(),
                    source_label: rel.source_label.clone(),
                    target_label: rel.target_label.clone(),
                });
            }
            let owner = format!("relationship {}", rel.pattern());
            canonicalize_properties(&mut rel.properties, || owner.clone())?;
        }

        nodes.sort_by(|a, b| a.label.cmp(&b.label));
        relationships.sort_by_key(RelationshipSpec::key);
        Ok(GraphSchema {
            nodes,
            relationships,
        })
    }

    pub fn nodes(&self) -> &[NodeSpec] {
        &self.nodes
    }

    pub fn relationships(&self) -> &[RelationshipSpec] {
        &self.relationships
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn node(&self, label: &str) -> Option<&NodeSpec> {
        self.nodes
            .binary_search_by(|n| n.label.as_str().cmp(label))
            .ok()
            .map(|i| &self.nodes[i])
    }

    pub fn relationship(&self, key: &RelKey) -> Option<&RelationshipSpec> {
        self.relationships
            .binary_search_by(|r| {
                (&r.rel_type, &r.source_label, &r.target_label).cmp(&(
                    &key.rel_type,
                    &key.source_label,
                    &key.target_label,
                ))
            })
            .ok()
            .map(|i| &self.relationships[i])
    }

    /// Restricts the schema to the given labels and relationship keys, keeping
    /// every property of each kept element. Relationships whose endpoints are
    /// not both kept are dropped.
    pub fn restrict(&self, labels: &BTreeSet<String>, rels: &BTreeSet<RelKey>) -> GraphSchema {
        let nodes = self
            .nodes
            .iter()
            .filter(|n| labels.contains(&n.label))
            .cloned()
            .collect();
        let relationships = self
            .relationships
            .iter()
            .filter(|r| {
                rels.contains(&r.key())
                    && labels.contains(&r.source_label)
                    && labels.contains(&r.target_label)
            })
            .cloned()
            .collect();
        // Already canonical and closed.
        GraphSchema {
            nodes,
            relationships,
        }
    }

    pub fn from_json_str(text: &str) -> Result<Self, SchemaError> {
        load_schema(text.as_bytes())
    }

    pub fn to_json_string(&self) -> String {
        String::from_utf8(save_schema(self)).expect("serde_json emits UTF-8")
    }
}

fn canonicalize_properties(
    props: &mut [PropertySpec],
    owner: impl Fn() -> String,
) -> Result<(), SchemaError> {
    let mut seen = BTreeSet::new();
    for prop in props.iter() {
        if prop.name.is_empty() {
            return Err(SchemaError::EmptyName {
                what: format!("property name on {}", owner()),
            });
        }
        if !seen.insert(prop.name.as_str()) {
            return Err(SchemaError::DuplicateProperty {
                owner: owner(),
                name: prop.name.clone(),
            });
        }
        if prop.samples.iter().any(String::is_empty) {
            return Err(SchemaError::EmptySample {
                owner: owner(),
                property: prop.name.clone(),
            });
        }
    }
    props.sort_by(|a, b| a.name.cmp(&b.name));
    Ok(())
}

// On-disk document shape.

#[derive(Serialize, Deserialize)]
struct SchemaDoc {
    #[serde(default)]
    nodes: Vec<NodeDoc>,
    #[serde(default)]
    relationships: Vec<RelDoc>,
}

#[derive(Serialize, Deserialize)]
struct NodeDoc {
    label: String,
    #[serde(default)]
    properties: Vec<PropertyDoc>,
}

#[derive(Serialize, Deserialize)]
struct RelDoc {
    #[serde(rename = "type")]
    rel_type: String,
    source: String,
    target: String,
    #[serde(default)]
    properties: Vec<PropertyDoc>,
}

#[derive(Serialize, Deserialize)]
struct PropertyDoc {
    name: String,
    #[serde(rename = "type")]
    kind: String,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    samples: Vec<SampleValue>,
}

/// Samples are display strings; numeric and boolean literals are accepted and
/// stringified.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum SampleValue {
    Text(String),
    Number(serde_json::Number),
    Flag(bool),
}

impl SampleValue {
    fn into_display(self) -> String {
        match self {
            SampleValue::Text(s) => s,
            SampleValue::Number(n) => n.to_string(),
            SampleValue::Flag(b) => b.to_string(),
        }
    }
}

fn ingest_properties(docs: Vec<PropertyDoc>, owner: &str) -> Vec<PropertySpec> {
    docs.into_iter()
        .map(|doc| {
            let value_type = ValueType::parse(&doc.kind).unwrap_or_else(|| {
                log::warn!(
                    "unknown property type `{}` for `{}` on {owner}; treating as STRING",
                    doc.kind,
                    doc.name
                );
                ValueType::String
            });
            let samples = doc
                .samples
                .into_iter()
                .take(MAX_INGESTED_SAMPLES)
                .map(SampleValue::into_display)
                .collect();
            PropertySpec {
                name: doc.name,
                value_type,
                samples,
            }
        })
        .collect()
}

fn export_properties(props: &[PropertySpec]) -> Vec<PropertyDoc> {
    props
        .iter()
        .map(|p| PropertyDoc {
            name: p.name.clone(),
            kind: p.value_type.as_str().to_string(),
            samples: p.samples.iter().cloned().map(SampleValue::Text).collect(),
        })
        .collect()
}

/// Reads a schema document.
pub fn load_schema<R: Read>(mut source: R) -> Result<GraphSchema, SchemaError> {
    let mut bytes = Vec::new();
    source.read_to_end(&mut bytes)?;
    let doc: SchemaDoc = serde_json::from_slice(&bytes).map_err(SchemaError::from_json)?;

    let nodes = doc
        .nodes
        .into_iter()
        .map(|n| {
            let owner = format!("node `{}`", n.label);
            NodeSpec {
                properties: ingest_properties(n.properties, &owner),
                label: n.label,
            }
        })
        .collect();
    let relationships = doc
        .relationships
        .into_iter()
        .map(|r| {
            let owner = format!("relationship `{}`", r.rel_type);
            RelationshipSpec {
                properties: ingest_properties(r.properties, &owner),
                rel_type: r.rel_type,
                source_label: r.source,
                target_label: r.target,
            }
        })
        .collect();
    GraphSchema::new(nodes, relationships)
}

/// Writes the canonical document form (pretty JSON, trailing newline).
pub fn save_schema(schema: &GraphSchema) -> Vec<u8> {
    let doc = SchemaDoc {
        nodes: schema
            .nodes
            .iter()
            .map(|n| NodeDoc {
                label: n.label.clone(),
                properties: export_properties(&n.properties),
            })
            .collect(),
        relationships: schema
            .relationships
            .iter()
            .map(|r| RelDoc {
                rel_type: r.rel_type.clone(),
                source: r.source_label.clone(),
                target: r.target_label.clone(),
                properties: export_properties(&r.properties),
            })
            .collect(),
    };
    let mut out = serde_json::to_vec_pretty(&doc).expect("schema document serializes");
    out.push(b'\n');
    out
}

#[derive(Debug, Error)]
#[error("unknown schema id `{0}`")]
pub struct UnknownSchema(pub String);

/// Schemas keyed by id, as referenced by dataset records.
#[derive(Debug, Clone, Default)]
pub struct SchemaCollection {
    schemas: BTreeMap<String, GraphSchema>,
}

impl SchemaCollection {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, id: impl Into<String>, schema: GraphSchema) {
        self.schemas.insert(id.into(), schema);
    }

    pub fn get(&self, id: &str) -> Result<&GraphSchema, UnknownSchema> {
        self.schemas
            .get(id)
            .ok_or_else(|| UnknownSchema(id.to_string()))
    }

    /// The only schema, when exactly one is loaded.
    pub fn single(&self) -> Option<(&str, &GraphSchema)> {
        if self.schemas.len() == 1 {
            self.schemas.iter().next().map(|(k, v)| (k.as_str(), v))
        } else {
            None
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &GraphSchema)> {
        self.schemas.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn len(&self) -> usize {
        self.schemas.len()
    }

    pub fn is_empty(&self) -> bool {
        self.schemas.is_empty()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const FIG1: &str = include_str!("../fixtures/news_graph.json");

    #[test]
    fn minimal_schema_has_one_node() {
        let s = GraphSchema::from_json_str(
            r#"{"nodes":[{"label":"A","properties":[]}],"relationships":[]}"#,
        )
        .unwrap();
        assert_eq!(s.nodes().len(), 1);
        assert!(s.relationships().is_empty());
    }

    #[test]
    fn news_fixture_loads() {
        let s = GraphSchema::from_json_str(FIG1).unwrap();
        let labels: Vec<_> = s.nodes().iter().map(|n| n.label.as_str()).collect();
        assert_eq!(labels, ["Article", "Organization", "Person"]);
        let types: Vec<_> = s
            .relationships()
            .iter()
            .map(|r| r.rel_type.as_str())
            .collect();
        assert_eq!(types, ["HAS_CEO", "HAS_INVESTOR", "MENTIONS"]);
        let person = s.node("Person").unwrap();
        assert!(person.properties.iter().any(|p| p.name == "name"));
        assert!(person.properties.iter().any(|p| p.name == "age"));
    }

    #[test]
    fn dangling_endpoint_is_rejected() {
        let doc = r#"{"nodes":[{"label":"A"}],
            "relationships":[{"type":"HAUNTS","source":"Ghost","target":"A"}]}"#;
        match GraphSchema::from_json_str(doc) {
            Err(SchemaError::UnknownEndpoint {
                rel_type, missing, ..
            }) => {
                assert_eq!(rel_type, "HAUNTS");
                assert_eq!(missing, "Ghost");
            }
            other => panic!("expected referential error, got {other:?}"),
        }
    }

    #[test]
    fn duplicates_are_rejected() {
        let dup_label = r#"{"nodes":[{"label":"A"},{"label":"A"}]}"#;
        assert!(matches!(
            GraphSchema::from_json_str(dup_label),
            Err(SchemaError::DuplicateLabel(l)) if l == "A"
        ));
        let dup_rel = r#"{"nodes":[{"label":"A"}],"relationships":[
            {"type":"R","source":"A","target":"A"},{"type":"R","source":"A","target":"A"}]}"#;
        assert!(matches!(
            GraphSchema::from_json_str(dup_rel),
            Err(SchemaError::DuplicateRelationship { .. })
        ));
        let dup_prop = r#"{"nodes":[{"label":"A","properties":[
            {"name":"x","type":"STRING"},{"name":"x","type":"INTEGER"}]}]}"#;
        assert!(matches!(
            GraphSchema::from_json_str(dup_prop),
            Err(SchemaError::DuplicateProperty { .. })
        ));
    }

    #[test]
    fn parse_error_reports_position() {
        let err =
            GraphSchema::from_json_str("{\n  \"nodes\": [\n    {\"label\": }\n]}").unwrap_err();
        match err {
            SchemaError::Parse {
                line,
                column,
                message,
            } => {
                assert_eq!(line, 3);
                assert!(column > 0);
                assert!(!message.contains("at line"), "{message}");
            }
            other => panic!("expected parse error, got {other:?}"),
        }
    }

    #[test]
    fn empty_schema_saves_empty_sections() {
        let text = GraphSchema::empty().to_json_string();
        assert_eq!(text, "{\n  \"nodes\": [],\n  \"relationships\": []\n}\n");
        assert_eq!(
            GraphSchema::from_json_str(&text).unwrap(),
            GraphSchema::empty()
        );
    }

    #[test]
    fn save_sorts_unsorted_input() {
        let doc = r#"{"nodes":[
            {"label":"Zeta","properties":[{"name":"b","type":"int"},{"name":"a","type":"string"}]},
            {"label":"Alpha"}],
          "relationships":[
            {"type":"R","source":"Zeta","target":"Alpha"},
            {"type":"Q","source":"Zeta","target":"Zeta"},
            {"type":"R","source":"Alpha","target":"Alpha"}]}"#;
        let s = GraphSchema::from_json_str(doc).unwrap();

        // Independently sorted listing of the same content.
        let mut labels = vec!["Zeta", "Alpha"];
        labels.sort();
        let mut triples = vec![
            ("R", "Zeta", "Alpha"),
            ("Q", "Zeta", "Zeta"),
            ("R", "Alpha", "Alpha"),
        ];
        triples.sort();

        let saved: serde_json::Value = serde_json::from_slice(&save_schema(&s)).unwrap();
        let saved_labels: Vec<_> = saved["nodes"]
            .as_array()
            .unwrap()
            .iter()
            .map(|n| n["label"].as_str().unwrap())
            .collect();
        assert_eq!(saved_labels, labels);
        let saved_triples: Vec<_> = saved["relationships"]
            .as_array()
            .unwrap()
            .iter()
            .map(|r| {
                (
                    r["type"].as_str().unwrap(),
                    r["source"].as_str().unwrap(),
                    r["target"].as_str().unwrap(),
                )
            })
            .collect();
        assert_eq!(saved_triples, triples);
        let props: Vec<_> = saved["nodes"][1]["properties"]
            .as_array()
            .unwrap()
            .iter()
            .map(|p| p["name"].as_str().unwrap())
            .collect();
        assert_eq!(props, ["a", "b"]);
    }

    #[test]
    fn unknown_type_becomes_string_and_samples_are_capped() {
        let samples: Vec<String> = (0..25).map(|i| format!("\"v{i}\"")).collect();
        let doc = format!(
            r#"{{"nodes":[{{"label":"A","properties":[{{"name":"p","type":"hologram","samples":[{}]}}]}}]}}"#,
            samples.join(",")
        );
        let s = GraphSchema::from_json_str(&doc).unwrap();
        let p = &s.nodes()[0].properties[0];
        assert_eq!(p.value_type, ValueType::String);
        assert_eq!(p.samples.len(), MAX_INGESTED_SAMPLES);
        assert_eq!(p.samples[0], "v0");
    }

    #[test]
    fn numeric_samples_are_stringified() {
        let doc = r#"{"nodes":[{"label":"A","properties":[{"name":"n","type":"INTEGER","samples":[3, 4.5, true]}]}]}"#;
        let s = GraphSchema::from_json_str(doc).unwrap();
        assert_eq!(s.nodes()[0].properties[0].samples, ["3", "4.5", "true"]);
    }

    #[test]
    fn empty_sample_is_rejected() {
        let doc = r#"{"nodes":[{"label":"A","properties":[{"name":"n","type":"STRING","samples":[""]}]}]}"#;
        assert!(matches!(
            GraphSchema::from_json_str(doc),
            Err(SchemaError::EmptySample { .. })
        ));
    }

    #[test]
    fn value_type_parsing() {
        assert_eq!(ValueType::parse("date_time"), Some(ValueType::DateTime));
        assert_eq!(ValueType::parse("LIST OF STRING"), Some(ValueType::List));
        assert_eq!(ValueType::parse("Boolean"), Some(ValueType::Boolean));
        assert_eq!(ValueType::parse("blob"), None);
    }
}
