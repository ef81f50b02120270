use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use clap::ValueEnum;
use schema_scalpel::prune::embed::Embedder;
use schema_scalpel::prune::ner::EntityRecognizer;
use schema_scalpel::{
    load_dataset, load_schema, prune_exact, prune_ner_exact, prune_similarity, render,
    DatasetRecord, GraphSchema, PrunedSchema, RenderFormat, SchemaCollection, SimilarityConfig,
};

use crate::error::CliError;
use crate::providers::{self, ProviderSpec};
use crate::PruneOptions;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Variant {
    Enhanced,
    Base,
    PruneExact,
    PruneNerExact,
    PruneSimilarity,
}

impl Variant {
    pub const ALL: [Variant; 5] = [
        Variant::Enhanced,
        Variant::Base,
        Variant::PruneExact,
        Variant::PruneNerExact,
        Variant::PruneSimilarity,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Variant::Enhanced => "enhanced",
            Variant::Base => "base",
            Variant::PruneExact => "prune-exact",
            Variant::PruneNerExact => "prune-ner-exact",
            Variant::PruneSimilarity => "prune-similarity",
        }
    }

    pub fn static_format(self) -> Option<RenderFormat> {
        match self {
            Variant::Enhanced => Some(RenderFormat::Enhanced),
            Variant::Base => Some(RenderFormat::Base),
            _ => None,
        }
    }

    pub fn uses_ner(self) -> bool {
        self == Variant::PruneNerExact
    }

    pub fn uses_embedder(self) -> bool {
        self == Variant::PruneSimilarity
    }
}

/// Defaults to every variant when none are named; duplicates dropped.
pub fn variants_or_all(requested: &[Variant]) -> Vec<Variant> {
    if requested.is_empty() {
        return Variant::ALL.to_vec();
    }
    let mut out: Vec<Variant> = Vec::new();
    for v in requested {
        if !out.contains(v) {
            out.push(*v);
        }
    }
    out
}

fn open(path: &Path) -> Result<BufReader<File>, CliError> {
    File::open(path)
        .map(BufReader::new)
        .map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

pub fn schema_id(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

pub fn load_schemas(paths: &[PathBuf]) -> Result<SchemaCollection, CliError> {
    let mut schemas = SchemaCollection::new();
    for path in paths {
        let id = schema_id(path);
        if schemas.get(&id).is_ok() {
            return Err(CliError::Usage(format!("schema id `{id}` given twice")));
        }
        let schema = load_schema(open(path)?)
            .map_err(|e| CliError::input(format!("{}: {e}", path.display())))?;
        schemas.insert(id, schema);
    }
    Ok(schemas)
}

pub fn load_records(path: &Path) -> Result<Vec<DatasetRecord>, CliError> {
    load_dataset(open(path)?).map_err(|e| CliError::input(format!("{}: {e}", path.display())))
}

/// Providers and settings for the pruning variants.
pub struct Pruners {
    recognizer: Box<dyn EntityRecognizer>,
    embedder: Box<dyn Embedder>,
    threshold: f64,
    pub format: RenderFormat,
}

impl Pruners {
    /// Adapters are only started for variants that need them.
    pub fn new(opts: &PruneOptions, variants: &[Variant]) -> Result<Self, CliError> {
        let recognizer = if variants.iter().any(|v| v.uses_ner()) {
            providers::recognizer(&opts.ner)?
        } else {
            providers::recognizer(&ProviderSpec::Builtin)?
        };
        let embedder = if variants.iter().any(|v| v.uses_embedder()) {
            providers::embedder(&opts.embedder)?
        } else {
            providers::embedder(&ProviderSpec::Builtin)?
        };
        Ok(Pruners {
            recognizer,
            embedder,
            threshold: opts.threshold,
            format: opts.pruned_format,
        })
    }

    pub fn prune<'a>(
        &self,
        variant: Variant,
        schema: &'a GraphSchema,
        question: &str,
    ) -> Result<PrunedSchema<'a>, CliError> {
        Ok(match variant {
            Variant::PruneExact => prune_exact(schema, question),
            Variant::PruneNerExact => prune_ner_exact(schema, question, self.recognizer.as_ref())?,
            Variant::PruneSimilarity => {
                let config = SimilarityConfig::new(self.threshold, self.embedder.as_ref())?;
                prune_similarity(schema, question, &config)?
            }
            Variant::Enhanced | Variant::Base => {
                return Err(CliError::Usage(format!(
                    "`{}` is not a pruning variant",
                    variant.name()
                )))
            }
        })
    }

    /// Schema text a prompt embeds under `variant`.
    pub fn schema_text(
        &self,
        variant: Variant,
        schema: &GraphSchema,
        question: &str,
    ) -> Result<String, CliError> {
        match variant.static_format() {
            Some(format) => Ok(render(schema, format)),
            None => Ok(self.prune(variant, schema, question)?.render(self.format)),
        }
    }
}
