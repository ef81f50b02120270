//! Prompt assembly, token counting, token statistics and cost estimation.

pub mod cost;
pub mod stats;
pub mod template;
pub mod tokenize;

pub use cost::{
    estimate_cost, load_pricings, reference_pricings, CostError, CostEstimate, NamedPricing,
    PricingModel,
};
pub use stats::{token_stats, EmptySample, TokenStats};
pub use template::{build_prompt, PromptBundle, PromptError, SYSTEM_INSTRUCTION};
pub use tokenize::{count_tokens, split_tokens, ClassTokenizer, Tokenizer};
