#![allow(dead_code)]

use std::collections::BTreeSet;

use proptest::prelude::*;
use schema_scalpel::{
    GraphSchema, NodeSpec, PropertySpec, PrunedSchema, RelKey, RelationshipSpec, ValueType,
};

pub const ACME_QUESTION: &str = "List the articles that mention the organization 'Acme Group'.";
pub const ENERGY_QUESTION: &str = "List the articles that mention the organization 'Acme Energy'.";

pub fn fixture(name: &str) -> String {
    let path = format!("{}/fixtures/{name}", env!("CARGO_MANIFEST_DIR"));
    std::fs::read_to_string(&path).unwrap_or_else(|e| panic!("{path}: {e}"))
}

pub fn news() -> GraphSchema {
    GraphSchema::from_json_str(&fixture("news_graph.json")).unwrap()
}

pub fn news_energy() -> GraphSchema {
    GraphSchema::from_json_str(&fixture("news_graph_energy.json")).unwrap()
}

const LABELS: &[&str] = &[
    "Person",
    "Movie",
    "Organization",
    "Article",
    "City",
    "Genre",
    "Award",
    "Energy",
];
const PROPS: &[&str] = &[
    "name",
    "title",
    "age",
    "releaseYear",
    "founded",
    "rating",
    "population",
    "isPublic",
    "summary",
    "birth_date",
];
const REL_TYPES: &[&str] = &[
    "ACTED_IN",
    "DIRECTED",
    "HAS_CEO",
    "MENTIONS",
    "LOCATED_IN",
    "WON",
    "IN_GENRE",
    "PRODUCES",
];
const REL_PROPS: &[&str] = &["role", "since", "stake", "year"];
const KINDS: &[ValueType] = &[
    ValueType::String,
    ValueType::Integer,
    ValueType::Float,
    ValueType::Boolean,
    ValueType::Date,
];

fn props_strategy(
    pool: &'static [&'static str],
    max: usize,
) -> impl Strategy<Value = Vec<PropertySpec>> {
    prop::sample::subsequence(pool.to_vec(), 0..=max).prop_flat_map(|names| {
        let n = names.len();
        (
            Just(names),
            prop::collection::vec(0..KINDS.len(), n),
            prop::collection::vec(prop::collection::vec("[A-Za-z0-9 ]{1,12}", 0..4), n),
        )
            .prop_map(|(names, kinds, samples)| {
                names
                    .into_iter()
                    .zip(kinds)
                    .zip(samples)
                    .map(|((name, k), s)| PropertySpec::new(name, KINDS[k]).with_samples(s))
                    .collect()
            })
    })
}

/// Random valid schemas: 1-6 nodes, up to 8 relationships between them.
pub fn schema_strategy() -> impl Strategy<Value = GraphSchema> {
    prop::sample::subsequence(LABELS.to_vec(), 1..=6)
        .prop_flat_map(|labels| {
            let n = labels.len();
            (
                Just(labels),
                prop::collection::vec(props_strategy(PROPS, 4), n),
                prop::collection::vec(
                    (0..REL_TYPES.len(), 0..n, 0..n, props_strategy(REL_PROPS, 2)),
                    0..8,
                ),
            )
        })
        .prop_map(|(labels, props, rels)| {
            let nodes = labels
                .iter()
                .zip(props)
                .map(|(l, p)| NodeSpec::new(*l, p))
                .collect();
            let mut seen = BTreeSet::new();
            let relationships = rels
                .into_iter()
                .filter(|(t, s, g, _)| seen.insert((*t, *s, *g)))
                .map(|(t, s, g, p)| RelationshipSpec::new(REL_TYPES[t], labels[s], labels[g], p))
                .collect();
            GraphSchema::new(nodes, relationships).expect("generated schema is valid")
        })
}

const QUESTION_WORDS: &[&str] = &[
    "the",
    "which",
    "list",
    "how",
    "many",
    "of",
    "with",
    "qwzx",
    "bnmp",
    "persons",
    "people",
    "movies",
    "movie",
    "organisation",
    "organizations",
    "articles",
    "mention",
    "mentions",
    "acted",
    "in",
    "has",
    "ceo",
    "title",
    "titles",
    "release",
    "year",
    "years",
    "rating",
    "cities",
    "located",
    "genre",
    "awards",
    "won",
    "is",
    "public",
    "birth",
    "date",
    "role",
    "stake",
    "since",
    "energy",
    "'Acme Energy'",
    "'Tom Hanks'",
    "Globex Corporation",
    "Person",
    "\"Energy\"",
    "name",
    "names",
    "ages",
    "summary",
    "populations",
    "directed",
];

pub fn question_strategy() -> impl Strategy<Value = String> {
    (
        prop::collection::vec(prop::sample::select(QUESTION_WORDS.to_vec()), 1..10),
        any::<bool>(),
    )
        .prop_map(|(words, question_mark)| {
            let mut q = words.join(" ");
            if question_mark {
                q.push('?');
            }
            q
        })
}

/// Retained elements are origin elements (same label/triple, identical
/// properties) and retained relationships have retained endpoints.
pub fn check_subset_and_closure(p: &PrunedSchema) -> Result<(), String> {
    let origin = p.origin();
    for node in p.retained().nodes() {
        match origin.node(&node.label) {
            Some(o) if o == node => {}
            _ => return Err(format!("node {} not in origin", node.label)),
        }
    }
    let labels = p.retained_labels();
    for rel in p.retained().relationships() {
        match origin.relationship(&rel.key()) {
            Some(o) if o == rel => {}
            _ => return Err(format!("relationship {} not in origin", rel.key())),
        }
        if !labels.contains(&rel.source_label) || !labels.contains(&rel.target_label) {
            return Err(format!("relationship {} lost an endpoint", rel.key()));
        }
    }
    Ok(())
}

pub fn is_subset(small: &PrunedSchema, big: &PrunedSchema) -> bool {
    small.retained_labels().is_subset(&big.retained_labels())
        && small.retained_keys().is_subset(&big.retained_keys())
}

pub fn keys(p: &PrunedSchema) -> BTreeSet<RelKey> {
    p.retained_keys()
}

/// Brute-force GLEU counts: enumerate every n-gram window of both whitespace
/// token lists and pair candidate n-grams with unused equal reference n-grams.
pub fn oracle_counts(candidate: &str, reference: &str, max_n: usize) -> (usize, usize, usize) {
    let cand: Vec<&str> = candidate.split_whitespace().collect();
    let refs: Vec<&str> = reference.split_whitespace().collect();
    let grams = |toks: &[&str]| -> Vec<Vec<String>> {
        let mut out = Vec::new();
        for n in 1..=max_n {
            if n > toks.len() {
                break;
            }
            for i in 0..=toks.len() - n {
                out.push(toks[i..i + n].iter().map(|s| s.to_string()).collect());
            }
        }
        out
    };
    let cg = grams(&cand);
    let rg = grams(&refs);
    let mut used = vec![false; rg.len()];
    let mut overlap = 0;
    for g in &cg {
        if let Some(j) = (0..rg.len()).find(|&j| !used[j] && rg[j] == *g) {
            used[j] = true;
            overlap += 1;
        }
    }
    (overlap, cg.len(), rg.len())
}

pub fn oracle_score(overlap: usize, cand: usize, reference: usize) -> f64 {
    if cand == 0 || reference == 0 {
        return 0.0;
    }
    (overlap as f64 / cand as f64).min(overlap as f64 / reference as f64)
}

/// Space-separated strings over a small single-class vocabulary, so the
/// class-transition tokenizer and whitespace splitting agree.
pub fn token_string_strategy() -> impl Strategy<Value = String> {
    const VOCAB: &[&str] = &[
        "MATCH", "RETURN", "n", "m", "(", ")", "WHERE", "1", "42", "->", "name", ".",
    ];
    prop::collection::vec(prop::sample::select(VOCAB.to_vec()), 1..=12).prop_map(|t| t.join(" "))
}
