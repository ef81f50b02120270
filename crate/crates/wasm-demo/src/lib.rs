//! Browser bindings: render a schema, prune it against a question, and price
//! the resulting prompt. Every entry point takes the schema as JSON text and
//! returns text or a JSON document.

use serde_json::json;
use wasm_bindgen::prelude::*;

use schema_scalpel::prompt::{build_prompt, estimate_cost, reference_pricings, ClassTokenizer};
use schema_scalpel::prune::ner::RuleBasedRecognizer;
use schema_scalpel::{
    prune_exact, prune_ner_exact, prune_similarity, render, GraphSchema, PrunedSchema,
    RenderFormat, SimilarityConfig,
};

const SAMPLE_SCHEMA: &str = include_str!("../../core/fixtures/news_graph_energy.json");

fn parse_schema(schema_json: &str) -> Result<GraphSchema, String> {
    GraphSchema::from_json_str(schema_json).map_err(|e| e.to_string())
}

fn parse_format(format: &str) -> Result<RenderFormat, String> {
    format.parse()
}

fn prune<'a>(
    schema: &'a GraphSchema,
    question: &str,
    strategy: &str,
    threshold: f64,
) -> Result<PrunedSchema<'a>, String> {
    match strategy {
        "prune-exact" => Ok(prune_exact(schema, question)),
        "prune-ner-exact" => {
            prune_ner_exact(schema, question, &RuleBasedRecognizer).map_err(|e| e.to_string())
        }
        "prune-similarity" => {
            let config = SimilarityConfig::builtin(threshold).map_err(|e| e.to_string())?;
            prune_similarity(schema, question, &config).map_err(|e| e.to_string())
        }
        other => Err(format!("unknown pruning strategy `{other}`")),
    }
}

/// Schema text for a variant: `enhanced`, `base`, or a pruning strategy
/// rendered in the Base layout.
fn variant_text(
    schema: &GraphSchema,
    question: &str,
    variant: &str,
    threshold: f64,
) -> Result<String, String> {
    match variant {
        "enhanced" => Ok(render(schema, RenderFormat::Enhanced)),
        "base" => Ok(render(schema, RenderFormat::Base)),
        strategy => Ok(prune(schema, question, strategy, threshold)?.render(RenderFormat::Base)),
    }
}

pub fn render_text(schema_json: &str, format: &str) -> Result<String, String> {
    Ok(render(&parse_schema(schema_json)?, parse_format(format)?))
}

/// `{rendered, fallback, retained_labels, retained_relationships, trace}`.
pub fn prune_json(
    schema_json: &str,
    question: &str,
    strategy: &str,
    threshold: f64,
    format: &str,
) -> Result<String, String> {
    let schema = parse_schema(schema_json)?;
    let pruned = prune(&schema, question, strategy, threshold)?;
    let doc = json!({
        "rendered": pruned.render(parse_format(format)?),
        "fallback": pruned.is_fallback(),
        "retained_labels": pruned.retained_labels(),
        "retained_relationships": pruned.retained_keys(),
        "trace": pruned.trace(),
    });
    Ok(doc.to_string())
}

/// Token count per variant for one question, and the cost of `instances`
/// such prompts under each reference pricing:
/// `[{variant, tokens, costs: [{pricing, cost, display}]}]`.
pub fn cost_json(
    schema_json: &str,
    question: &str,
    threshold: f64,
    instances: u32,
) -> Result<String, String> {
    let schema = parse_schema(schema_json)?;
    let pricings = reference_pricings();
    let mut rows = Vec::new();
    for variant in [
        "enhanced",
        "base",
        "prune-exact",
        "prune-ner-exact",
        "prune-similarity",
    ] {
        let text = variant_text(&schema, question, variant, threshold)?;
        let tokens = build_prompt(&text, question, variant, &ClassTokenizer)
            .map_err(|e| e.to_string())?
            .token_count;
        let mut costs = Vec::new();
        for p in &pricings {
            let est = estimate_cost(tokens as u64, u64::from(instances), &p.model, variant)
                .map_err(|e| e.to_string())?;
            costs.push(json!({
                "pricing": p.name,
                "cost": est.cost.to_string(),
                "display": est.display_cost().to_string(),
            }));
        }
        rows.push(json!({"variant": variant, "tokens": tokens, "costs": costs}));
    }
    Ok(serde_json::Value::from(rows).to_string())
}

#[wasm_bindgen]
pub fn sample_schema() -> String {
    SAMPLE_SCHEMA.to_string()
}

#[wasm_bindgen]
pub fn render_schema(schema_json: &str, format: &str) -> Result<String, JsError> {
    render_text(schema_json, format).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn prune_schema(
    schema_json: &str,
    question: &str,
    strategy: &str,
    threshold: f64,
    format: &str,
) -> Result<String, JsError> {
    prune_json(schema_json, question, strategy, threshold, format).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn estimate_costs(
    schema_json: &str,
    question: &str,
    threshold: f64,
    instances: u32,
) -> Result<String, JsError> {
    cost_json(schema_json, question, threshold, instances).map_err(|e| JsError::new(&e))
}
