use std::fs::File;

use serde_json::json;

use schema_scalpel::prompt::{estimate_cost, load_pricings, reference_pricings, NamedPricing};

use crate::commands::stats::measure;
use crate::context::{load_records, load_schemas, variants_or_all, Pruners};
use crate::error::{BatchStatus, CliError};
use crate::output::{table, Jsonl};
use crate::providers;
use crate::CostArgs;

fn pricings(args: &CostArgs) -> Result<Vec<NamedPricing>, CliError> {
    let all = match &args.pricing {
        Some(path) => {
            let file = File::open(path)
                .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
            load_pricings(file).map_err(|e| CliError::input(format!("{}: {e}", path.display())))?
        }
        None => reference_pricings(),
    };
    if args.pricing_names.is_empty() {
        return Ok(all);
    }
    args.pricing_names
        .iter()
        .map(|name| {
            all.iter()
                .find(|p| p.name == *name)
                .cloned()
                .ok_or_else(|| {
                    let known: Vec<&str> = all.iter().map(|p| p.name.as_str()).collect();
                    CliError::input(format!(
                        "unknown pricing `{name}` (known: {})",
                        known.join(", ")
                    ))
                })
        })
        .collect()
}

pub fn run(args: CostArgs) -> Result<i32, CliError> {
    let pricings = pricings(&args)?;
    let mut status = BatchStatus::default();
    // (variant label, tokens per instance)
    let token_rows: Vec<(String, u64)> = match (args.tokens, &args.dataset) {
        (Some(tokens), _) => {
            let label = match args.variants.as_slice() {
                [one] => one.name().to_string(),
                _ => "custom".to_string(),
            };
            vec![(label, tokens)]
        }
        (None, Some(dataset)) => {
            let variants = variants_or_all(&args.variants);
            let schemas = load_schemas(&args.schemas)?;
            let records = load_records(dataset)?;
            let tokenizer = providers::tokenizer(&args.tokenizer)?;
            let pruners = Pruners::new(&args.prune, &variants)?;
            measure(
                &records,
                &schemas,
                &variants,
                tokenizer.as_ref(),
                &pruners,
                &mut status,
            )?
            .into_iter()
            .map(|(v, s)| (v.name().to_string(), s.median as u64))
            .collect()
        }
        (None, None) => unreachable!("clap requires --tokens or --dataset"),
    };

    let mut out = Jsonl::open(args.output.out.as_deref(), args.output.stamp)?;
    let mut rows = Vec::new();
    for (variant, tokens) in &token_rows {
        for p in &pricings {
            let est = estimate_cost(*tokens, args.instances, &p.model, variant)?;
            rows.push(vec![
                variant.clone(),
                tokens.to_string(),
                p.name.clone(),
                est.total_tokens.to_string(),
                est.cost.to_string(),
                est.display_cost().to_string(),
            ]);
            out.write(json!({
                "variant": variant,
                "tokens_per_instance": tokens,
                "instances": args.instances,
                "pricing": p.name,
                "total_tokens": est.total_tokens,
                "cost": est.cost.to_string(),
                "cost_display": est.display_cost().to_string(),
            }))?;
        }
    }
    out.finish()?;
    print!(
        "{}",
        table(
            &[
                "variant",
                "tokens",
                "pricing",
                "total tokens",
                "cost ($)",
                "display ($)"
            ],
            &rows
        )
    );
    Ok(status.exit_code())
}
