//! Text2Cypher instruction template.

use serde::Serialize;
use thiserror::Error;

use super::tokenize::Tokenizer;
use crate::provider::ProviderError;

pub const SYSTEM_INSTRUCTION: &str = "Task: Generate Cypher statement to query a graph database. \
Instructions: Use only the provided relationship types and properties in the schema. \
Do not use any other relationship types or properties that are not provided in the schema. \
Do not include any explanations or apologies in your responses. \
Do not respond to any questions that might ask anything else than for you to construct a Cypher statement. \
Do not include any text except the generated Cypher statement.";

pub const USER_INSTRUCTION_PREAMBLE: &str = "Generate Cypher statement to query a graph database. \
Use only the provided relationship types and properties in the schema.";

pub const OUTPUT_CUE: &str = "Cypher output:";

#[derive(Debug, Error)]
pub enum PromptError {
    #[error("prompt {0} must be non-empty")]
    EmptyInput(&'static str),
    #[error("tokenizer failed: {0}")]
    Tokenizer(#[from] ProviderError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct PromptBundle {
    pub system_text: String,
    pub user_text: String,
    pub token_count: usize,
    pub schema_variant: String,
}

/// Fills the user instruction in a single pass: placeholders appearing inside
/// the schema or question are left as is.
pub fn user_instruction(schema_text: &str, question: &str) -> String {
    let mut out = String::with_capacity(
        USER_INSTRUCTION_PREAMBLE.len() + schema_text.len() + question.len() + 48,
    );
    out.push_str(USER_INSTRUCTION_PREAMBLE);
    out.push_str("\nSchema: ");
    out.push_str(schema_text.trim_end_matches('\n'));
    out.push_str("\nQuestion: ");
    out.push_str(question);
    out.push('\n');
    out.push_str(OUTPUT_CUE);
    out
}

/// Builds the system/user pair and counts its tokens (sum over both parts).
pub fn build_prompt(
    schema_text: &str,
    question: &str,
    schema_variant: &str,
    tokenizer: &dyn Tokenizer,
) -> Result<PromptBundle, PromptError> {
    if schema_text.trim().is_empty() {
        return Err(PromptError::EmptyInput("schema"));
    }
    if question.trim().is_empty() {
        return Err(PromptError::EmptyInput("question"));
    }
    let user_text = user_instruction(schema_text, question);
    let token_count = tokenizer.count(SYSTEM_INSTRUCTION)? + tokenizer.count(&user_text)?;
    Ok(PromptBundle {
        system_text: SYSTEM_INSTRUCTION.to_string(),
        user_text,
        token_count,
        schema_variant: schema_variant.to_string(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::prompt::tokenize::{count_tokens, ClassTokenizer};

    #[test]
    fn slots_are_filled() {
        let p = build_prompt("S", "Q", "custom", &ClassTokenizer).unwrap();
        assert!(p.user_text.contains("Schema: S"));
        assert!(p.user_text.contains("Question: Q"));
        assert!(p.user_text.ends_with("Cypher output:"));
        assert_eq!(p.system_text, SYSTEM_INSTRUCTION);
        assert_eq!(
            p.token_count,
            count_tokens(&p.system_text) + count_tokens(&p.user_text)
        );
    }

    #[test]
    fn substitution_is_single_pass() {
        let p = build_prompt(
            "node {question}",
            "what about {schema}?",
            "x",
            &ClassTokenizer,
        )
        .unwrap();
        assert!(p.user_text.contains("Schema: node {question}"));
        assert!(p.user_text.contains("Question: what about {schema}?"));
    }

    #[test]
    fn empty_inputs_are_rejected() {
        assert!(matches!(
            build_prompt("", "q", "x", &ClassTokenizer),
            Err(PromptError::EmptyInput("schema"))
        ));
        assert!(matches!(
            build_prompt("s", " ", "x", &ClassTokenizer),
            Err(PromptError::EmptyInput("question"))
        ));
    }
}
