use rayon::prelude::*;
use serde_json::json;

use schema_scalpel::prompt::{build_prompt, token_stats, TokenStats, Tokenizer};
use schema_scalpel::{DatasetRecord, SchemaCollection};

use crate::context::{load_records, load_schemas, variants_or_all, Pruners, Variant};
use crate::error::{BatchStatus, CliError};
use crate::output::{table, Jsonl};
use crate::providers;
use crate::StatsArgs;

/// Prompt token counts per variant over all records. Failed records are
/// reported on stderr and left out of the counts.
pub fn measure(
    records: &[DatasetRecord],
    schemas: &SchemaCollection,
    variants: &[Variant],
    tokenizer: &dyn Tokenizer,
    pruners: &Pruners,
    status: &mut BatchStatus,
) -> Result<Vec<(Variant, TokenStats)>, CliError> {
    if records.is_empty() {
        return Err(CliError::input("dataset has no records"));
    }
    let per_record: Vec<Vec<Result<usize, CliError>>> = records
        .par_iter()
        .map(|r| {
            variants
                .iter()
                .map(|&v| {
                    let schema = schemas.get(&r.schema_id).map_err(CliError::input)?;
                    let text = pruners.schema_text(v, schema, &r.question)?;
                    Ok(build_prompt(&text, &r.question, v.name(), tokenizer)?.token_count)
                })
                .collect()
        })
        .collect();

    let mut counts: Vec<Vec<usize>> = vec![Vec::with_capacity(records.len()); variants.len()];
    for (index, row) in per_record.into_iter().enumerate() {
        for (vi, result) in row.into_iter().enumerate() {
            match result {
                Ok(n) => counts[vi].push(n),
                Err(e) => {
                    eprintln!("record {index} ({}): {e}", variants[vi].name());
                    status.record(&e);
                }
            }
        }
    }
    variants
        .iter()
        .zip(counts)
        .map(|(&v, c)| {
            token_stats(&c)
                .map(|s| (v, s))
                .map_err(|_| CliError::input(format!("no record produced a `{}` prompt", v.name())))
        })
        .collect()
}

pub fn run(args: StatsArgs) -> Result<i32, CliError> {
    let variants = variants_or_all(&args.variants);
    let schemas = load_schemas(&args.schemas)?;
    let records = load_records(&args.dataset)?;
    let tokenizer = providers::tokenizer(&args.tokenizer)?;
    let pruners = Pruners::new(&args.prune, &variants)?;
    let mut status = BatchStatus::default();
    let stats = measure(
        &records,
        &schemas,
        &variants,
        tokenizer.as_ref(),
        &pruners,
        &mut status,
    )?;

    let mut out = Jsonl::open(args.output.out.as_deref(), args.output.stamp)?;
    let mut rows = Vec::new();
    for (v, s) in &stats {
        rows.push(vec![
            v.name().to_string(),
            s.n.to_string(),
            s.min.to_string(),
            s.max.to_string(),
            s.median.to_string(),
            s.p95.to_string(),
        ]);
        out.write(json!({
            "variant": v.name(),
            "n": s.n,
            "min": s.min,
            "max": s.max,
            "median": s.median,
            "p95": s.p95,
        }))?;
    }
    out.finish()?;
    print!(
        "{}",
        table(&["variant", "n", "min", "max", "median", "p95"], &rows)
    );
    Ok(status.exit_code())
}
