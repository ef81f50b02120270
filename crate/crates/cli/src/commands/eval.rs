use serde_json::json;

use schema_scalpel::eval::{evaluate_corpus, postprocess_cypher, EvalPair, QueryExecutor};
use schema_scalpel::DatasetRecord;

use crate::context::load_records;
use crate::error::{BatchStatus, CliError};
use crate::output::{table, Jsonl};
use crate::providers;
use crate::EvalArgs;

/// Fills in missing result sets through the executor, if there is one.
fn pair_for(
    record: &DatasetRecord,
    candidate: &str,
    executor: Option<&dyn QueryExecutor>,
) -> Result<EvalPair, CliError> {
    let pair = EvalPair::new(candidate, record.reference_cypher.clone());
    let reference = match (&record.reference_result, executor) {
        (Some(r), _) => Some(r.clone()),
        (None, Some(ex)) => Some(ex.execute(&record.schema_id, &record.reference_cypher)?),
        (None, None) => None,
    };
    let Some(reference) = reference else {
        return Ok(pair);
    };
    match (&record.candidate_result, executor) {
        (Some(c), _) => Ok(pair.with_results(c.clone(), reference)),
        (None, Some(ex)) => match ex.execute(&record.schema_id, &postprocess_cypher(candidate)) {
            Ok(rows) => Ok(pair.with_results(rows, reference)),
            Err(e) => {
                log::info!("candidate failed to execute: {e}");
                Ok(pair.with_failed_candidate(reference))
            }
        },
        (None, None) => Ok(pair),
    }
}

pub fn run(args: EvalArgs) -> Result<i32, CliError> {
    let records = load_records(&args.dataset)?;
    let executor = providers::executor(&args.executor)?;
    let mut status = BatchStatus::default();
    let mut skipped = 0usize;
    let mut pairs = Vec::new();
    let mut indices = Vec::new();
    for (index, record) in records.iter().enumerate() {
        let Some(candidate) = &record.candidate_cypher else {
            skipped += 1;
            continue;
        };
        match pair_for(record, candidate, executor.as_deref()) {
            Ok(pair) => {
                pairs.push(pair);
                indices.push(index);
            }
            Err(e) => {
                eprintln!("record {index}: {e}");
                status.record(&e);
            }
        }
    }
    if skipped > 0 {
        log::warn!("{skipped} records have no candidate_cypher and were skipped");
    }
    if pairs.is_empty() {
        return Err(CliError::input("no record could be evaluated"));
    }
    let report = evaluate_corpus(&pairs).map_err(CliError::input)?;

    let mut out = Jsonl::open(args.output.out.as_deref(), args.output.stamp)?;
    for (index, score) in indices.iter().zip(&report.per_pair) {
        out.write(json!({"kind": "pair", "index": index, "gleu": score.gleu, "exact_match": score.exact_match}))?;
    }
    out.write(json!({
        "kind": "summary",
        "gleu": report.gleu,
        "exact_match": report.exact_match,
        "n": report.n,
        "skipped": skipped,
        "failed": status.failures(),
    }))?;
    out.finish()?;

    let em = report
        .exact_match
        .map_or_else(|| "n/a".to_string(), |v| format!("{v:.4}"));
    let rows = vec![vec![
        format!("{:.4}", report.gleu),
        em,
        report.n.to_string(),
        skipped.to_string(),
        status.failures().to_string(),
    ]];
    print!(
        "{}",
        table(&["gleu", "exact_match", "n", "skipped", "failed"], &rows)
    );
    Ok(status.exit_code())
}
