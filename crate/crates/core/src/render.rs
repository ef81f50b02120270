//! Text renderings of a schema for prompt embedding.
//!
//! Enhanced layout:
//!
//! ```text
//! Node: Person
//!   age: INTEGER Examples: [34, 58]
//!   name: STRING Examples: [Tom Hanks, Julia Roberts]
//! Relationship: (:Organization)-[:HAS_CEO]->(:Person)
//!   since: DATE
//! ```
//!
//! Base layout:
//!
//! ```text
//! Node properties:
//! Person {age: INTEGER, name: STRING}
//! Relationship properties:
//! HAS_CEO {since: DATE}
//! The relationships:
//! (:Organization)-[:HAS_CEO]->(:Person)
//! ```

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::str::FromStr;

use crate::schema::{GraphSchema, PropertySpec, ValueType};

/// Samples shown per property in the Enhanced layout.
pub const MAX_RENDERED_SAMPLES: usize = 5;
/// Characters kept from a long sample before the ellipsis.
pub const MAX_SAMPLE_CHARS: usize = 40;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum RenderFormat {
    Enhanced,
    Base,
}

impl RenderFormat {
    pub fn as_str(self) -> &'static str {
        match self {
            RenderFormat::Enhanced => "enhanced",
            RenderFormat::Base => "base",
        }
    }
}

impl FromStr for RenderFormat {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "enhanced" => Ok(RenderFormat::Enhanced),
            "base" => Ok(RenderFormat::Base),
            other => Err(format!("unknown render format `{other}`")),
        }
    }
}

pub fn render(schema: &GraphSchema, format: RenderFormat) -> String {
    match format {
        RenderFormat::Enhanced => render_enhanced(schema),
        RenderFormat::Base => render_base(schema),
    }
}

fn render_enhanced(schema: &GraphSchema) -> String {
    let mut out = String::new();
    for node in schema.nodes() {
        let _ = writeln!(out, "Node: {}", node.label);
        write_property_lines(&mut out, &node.properties);
    }
    for rel in schema.relationships() {
        let _ = writeln!(out, "Relationship: {}", rel.pattern());
        write_property_lines(&mut out, &rel.properties);
    }
    out
}

fn write_property_lines(out: &mut String, props: &[PropertySpec]) {
    for prop in props {
        let _ = write!(out, "  {}: {}", prop.name, prop.value_type);
        if !prop.samples.is_empty() {
            let shown: Vec<String> = prop
                .samples
                .iter()
                .take(MAX_RENDERED_SAMPLES)
                .map(|s| truncate_sample(s))
                .collect();
            let _ = write!(out, " Examples: [{}]", shown.join(", "));
        }
        out.push('\n');
    }
}

fn truncate_sample(sample: &str) -> String {
    match sample.char_indices().nth(MAX_SAMPLE_CHARS) {
        Some((cut, _)) => format!("{}\u{2026}", &sample[..cut]),
        None => sample.to_string(),
    }
}

fn render_base(schema: &GraphSchema) -> String {
    let mut out = String::from("Node properties:\n");
    for node in schema.nodes() {
        let props: Vec<(&str, ValueType)> = node
            .properties
            .iter()
            .map(|p| (p.name.as_str(), p.value_type))
            .collect();
        write_compact_line(&mut out, &node.label, &props);
    }

    out.push_str("Relationship properties:\n");
    // One line per relationship type; properties merged across its triples.
    let mut by_type: BTreeMap<&str, BTreeMap<&str, ValueType>> = BTreeMap::new();
    for rel in schema.relationships() {
        if rel.properties.is_empty() {
            continue;
        }
        let entry = by_type.entry(rel.rel_type.as_str()).or_default();
        for p in &rel.properties {
            entry.entry(p.name.as_str()).or_insert(p.value_type);
        }
    }
    for (rel_type, props) in by_type {
        let props: Vec<(&str, ValueType)> = props.into_iter().collect();
        write_compact_line(&mut out, rel_type, &props);
    }

    out.push_str("The relationships:\n");
    for rel in schema.relationships() {
        out.push_str(&rel.pattern());
        out.push('\n');
    }
    out
}

fn write_compact_line(out: &mut String, name: &str, props: &[(&str, ValueType)]) {
    let body: Vec<String> = props.iter().map(|(n, t)| format!("{n}: {t}")).collect();
    let _ = writeln!(out, "{name} {{{}}}", body.join(", "));
}
