use rayon::prelude::*;
use serde_json::{json, Value};

use crate::context::{load_records, load_schemas, Pruners};
use crate::error::{BatchStatus, CliError};
use crate::output::Jsonl;
use crate::PruneCmd;

struct Job {
    question: String,
    schema_id: String,
}

pub fn run(args: PruneCmd) -> Result<i32, CliError> {
    if args.variant.static_format().is_some() {
        return Err(CliError::Usage(format!(
            "prune needs a pruning variant, not `{}`",
            args.variant.name()
        )));
    }
    let schemas = load_schemas(&args.schemas)?;
    let jobs: Vec<Job> = match (&args.dataset, &args.question) {
        (Some(path), _) => load_records(path)?
            .into_iter()
            .map(|r| Job {
                question: r.question,
                schema_id: r.schema_id,
            })
            .collect(),
        (None, Some(q)) => schemas
            .iter()
            .map(|(id, _)| Job {
                question: q.clone(),
                schema_id: id.to_string(),
            })
            .collect(),
        (None, None) => unreachable!("clap requires --dataset or --question"),
    };
    let pruners = Pruners::new(&args.prune, &[args.variant])?;
    let variant = args.variant;

    let results: Vec<Result<(Value, String), CliError>> = jobs
        .par_iter()
        .map(|job| {
            let schema = schemas.get(&job.schema_id).map_err(CliError::input)?;
            let pruned = pruners.prune(variant, schema, &job.question)?;
            let rendered = pruned.render(pruners.format);
            let labels: Vec<String> = pruned.retained_labels().into_iter().collect();
            let keys: Vec<_> = pruned.retained_keys().into_iter().collect();
            let summary = {
                let mut names = labels.clone();
                names.extend(keys.iter().map(|k| k.rel_type.clone()));
                names.join(", ")
            };
            let row = json!({
                "question": job.question,
                "schema_id": job.schema_id,
                "variant": variant.name(),
                "fallback": pruned.is_fallback(),
                "retained_labels": labels,
                "retained_relationships": keys,
                "trace": pruned.trace(),
                "rendered": rendered,
            });
            let fallback = if pruned.is_fallback() {
                " (fallback: full schema)"
            } else {
                ""
            };
            Ok((row, format!("retained: {summary}{fallback}\n{rendered}")))
        })
        .collect();

    let mut out = Jsonl::open(args.output.out.as_deref(), args.output.stamp)?;
    let mut status = BatchStatus::default();
    for (index, (job, result)) in jobs.iter().zip(results).enumerate() {
        println!("[{index}] {}: {}", job.schema_id, job.question);
        match result {
            Ok((mut row, human)) => {
                row["index"] = json!(index);
                print!("{human}");
                out.write(row)?;
            }
            Err(e) => {
                eprintln!("record {index}: {e}");
                status.record(&e);
                out.write(json!({
                    "index": index,
                    "question": job.question,
                    "schema_id": job.schema_id,
                    "variant": variant.name(),
                    "error": e.to_string(),
                }))?;
            }
        }
        println!();
    }
    out.finish()?;
    if status.failures() > 0 {
        eprintln!("{} of {} records failed", status.failures(), jobs.len());
    }
    Ok(status.exit_code())
}
