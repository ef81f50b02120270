mod commands;
mod context;
mod error;
mod output;
mod providers;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use schema_scalpel::prune::DEFAULT_SIMILARITY_THRESHOLD;
use schema_scalpel::RenderFormat;

use context::Variant;
use error::{CliError, EXIT_USAGE};
use providers::ProviderSpec;

/// Graph schema rendering, pruning, prompt metrics and Text2Cypher evaluation.
#[derive(Parser, Debug)]
#[command(name = "schema-scalpel", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Render schemas in a static format.
    Render(RenderArgs),
    /// Prune schemas against questions and emit the retained schema with a trace.
    Prune(PruneCmd),
    /// Prompt-token distribution per schema variant over a dataset.
    Stats(StatsArgs),
    /// Deployment cost per schema variant and pricing model.
    Cost(CostArgs),
    /// Score candidate Cypher against references (GLEU, ExactMatch).
    Eval(EvalArgs),
}

#[derive(Args, Debug)]
struct OutputArgs {
    /// Write newline-delimited JSON rows to this path.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Add a `generated_at` timestamp to JSON rows.
    #[arg(long)]
    stamp: bool,
}

#[derive(Args, Debug)]
struct PruneOptions {
    /// Similarity threshold in [0, 1].
    #[arg(long, default_value_t = DEFAULT_SIMILARITY_THRESHOLD, value_parser = parse_threshold)]
    threshold: f64,
    /// Entity recognizer: `builtin` or `adapter:<path>`.
    #[arg(long, default_value = "builtin")]
    ner: ProviderSpec,
    /// Term embedder: `builtin` or `adapter:<path>`.
    #[arg(long, default_value = "builtin")]
    embedder: ProviderSpec,
    /// Layout used to render pruned schemas.
    #[arg(long = "pruned-format", default_value = "base")]
    pruned_format: RenderFormat,
}

#[derive(Args, Debug)]
struct RenderArgs {
    /// Schema JSON file; repeatable. The file stem is the schema id.
    #[arg(long = "schema", required = true)]
    schemas: Vec<PathBuf>,
    #[arg(long, value_enum, default_value_t = Variant::Enhanced)]
    variant: Variant,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct PruneCmd {
    #[arg(long = "schema", required = true)]
    schemas: Vec<PathBuf>,
    /// JSONL dataset supplying questions.
    #[arg(
        long,
        required_unless_present = "question",
        conflicts_with = "question"
    )]
    dataset: Option<PathBuf>,
    /// A single question, pruned against every loaded schema.
    #[arg(long)]
    question: Option<String>,
    #[arg(long, value_enum)]
    variant: Variant,
    #[command(flatten)]
    prune: PruneOptions,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct StatsArgs {
    #[arg(long = "schema", required = true)]
    schemas: Vec<PathBuf>,
    #[arg(long)]
    dataset: PathBuf,
    /// Variants to measure; repeatable. Defaults to all five.
    #[arg(long = "variant", value_enum)]
    variants: Vec<Variant>,
    /// Token counter: `builtin` or `adapter:<path>`.
    #[arg(long, default_value = "builtin")]
    tokenizer: ProviderSpec,
    #[command(flatten)]
    prune: PruneOptions,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct CostArgs {
    /// Tokens per instance. Without it, medians are measured on --dataset.
    #[arg(long, conflicts_with = "dataset")]
    tokens: Option<u64>,
    #[arg(long = "schema", requires = "dataset")]
    schemas: Vec<PathBuf>,
    #[arg(long, required_unless_present = "tokens", requires = "schemas")]
    dataset: Option<PathBuf>,
    #[arg(long = "variant", value_enum)]
    variants: Vec<Variant>,
    #[arg(long, default_value = "builtin")]
    tokenizer: ProviderSpec,
    #[command(flatten)]
    prune: PruneOptions,
    /// Number of prompt instances.
    #[arg(long, default_value_t = 20_000)]
    instances: u64,
    /// Pricing config (JSON object or array). Defaults to the reference pricings.
    #[arg(long)]
    pricing: Option<PathBuf>,
    /// Restrict to these pricing names; repeatable.
    #[arg(long = "pricing-name")]
    pricing_names: Vec<String>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args, Debug)]
struct EvalArgs {
    /// JSONL dataset whose records carry `candidate_cypher`.
    #[arg(long)]
    dataset: PathBuf,
    /// Query executor for missing result sets: `builtin` (none) or `adapter:<path>`.
    #[arg(long, default_value = "builtin")]
    executor: ProviderSpec,
    #[command(flatten)]
    output: OutputArgs,
}

fn parse_threshold(s: &str) -> Result<f64, String> {
    let t: f64 = s.parse().map_err(|e| format!("{e}"))?;
    if (0.0..=1.0).contains(&t) {
        Ok(t)
    } else {
        Err(format!("{t} is outside [0, 1]"))
    }
}

fn run(cli: Cli) -> Result<i32, CliError> {
    match cli.command {
        Command::Render(a) => commands::render::run(a),
        Command::Prune(a) => commands::prune::run(a),
        Command::Stats(a) => commands::stats::run(a),
        Command::Cost(a) => commands::cost::run(a),
        Command::Eval(a) => commands::eval::run(a),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn"))
        .format_timestamp(None)
        .init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => ExitCode::SUCCESS,
                _ => ExitCode::from(EXIT_USAGE as u8),
            };
        }
    };
    match run(cli) {
        Ok(code) => ExitCode::from(code as u8),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
