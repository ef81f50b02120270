//! Entity recognition and question masking.

use std::ops::Range;

use serde::{Deserialize, Serialize};

use super::terms::{question_terms, Term};
use super::PruneError;
use crate::provider::ProviderError;

/// Tag used by the built-in recognizer for every span.
pub const ENTITY_TAG: &str = "ENTITY";

/// A recognized entity, as byte offsets into the question.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntitySpan {
    pub start: usize,
    pub end: usize,
    pub entity_type: String,
}

pub trait EntityRecognizer: Send + Sync {
    fn recognize(&self, text: &str) -> Result<Vec<EntitySpan>, ProviderError>;
}

/// Rule-based recognizer:
/// - text inside single, double or typographic quotes;
/// - maximal runs of capitalized words, excluding a sentence's first word.
#[derive(Debug, Clone, Copy, Default)]
pub struct RuleBasedRecognizer;

const QUOTE_PAIRS: [(char, char); 4] = [
    ('\'', '\''),
    ('"', '"'),
    ('\u{2018}', '\u{2019}'),
    ('\u{201C}', '\u{201D}'),
];

impl EntityRecognizer for RuleBasedRecognizer {
    fn recognize(&self, text: &str) -> Result<Vec<EntitySpan>, ProviderError> {
        let quoted = quoted_spans(text);
        let mut spans: Vec<EntitySpan> = quoted
            .iter()
            .map(|r| EntitySpan {
                start: r.start,
                end: r.end,
                entity_type: ENTITY_TAG.to_string(),
            })
            .collect();
        // Quote characters themselves are off limits to the capitalization rule.
        let blocked: Vec<Range<usize>> = quoted
            .iter()
            .map(|r| {
                let open = text[..r.start]
                    .chars()
                    .next_back()
                    .map_or(0, char::len_utf8);
                let close = text[r.end..].chars().next().map_or(0, char::len_utf8);
                r.start - open..r.end + close
            })
            .collect();
        spans.extend(
            capitalized_runs(text, &blocked)
                .into_iter()
                .map(|r| EntitySpan {
                    start: r.start,
                    end: r.end,
                    entity_type: ENTITY_TAG.to_string(),
                }),
        );
        spans.sort_by_key(|s| s.start);
        Ok(spans)
    }
}

fn quoted_spans(text: &str) -> Vec<Range<usize>> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut spans = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        let close = QUOTE_PAIRS
            .iter()
            .find(|(open, _)| *open == c)
            .map(|(_, close)| *close);
        let opens = close.is_some() && (i == 0 || !chars[i - 1].1.is_alphanumeric());
        if let (true, Some(close)) = (opens, close) {
            // The closing quote must not sit inside a word (apostrophes).
            let found = (i + 1..chars.len()).find(|&j| {
                chars[j].1 == close
                    && chars.get(j + 1).is_none_or(|(_, n)| !n.is_alphanumeric())
                    && !chars[j - 1].1.is_whitespace()
            });
            if let Some(j) = found {
                let start = pos + c.len_utf8();
                let end = chars[j].0;
                if text[start..end].trim().is_empty() {
                    i += 1;
                    continue;
                }
                spans.push(start..end);
                i = j + 1;
                continue;
            }
        }
        i += 1;
    }
    spans
}

fn capitalized_runs(text: &str, blocked: &[Range<usize>]) -> Vec<Range<usize>> {
    let words = question_terms(text);
    let mut runs = Vec::new();
    let mut current: Option<Range<usize>> = None;
    for (idx, word) in words.iter().enumerate() {
        let original = &text[word.start..word.end];
        let eligible = original.chars().next().is_some_and(char::is_uppercase)
            && !at_sentence_start(text, &words, idx)
            && !blocked
                .iter()
                .any(|b| b.start < word.end && word.start < b.end);
        // A run continues only across plain whitespace.
        let joins = current
            .as_ref()
            .is_some_and(|r| text[r.end..word.start].chars().all(char::is_whitespace));
        match (eligible, current.take()) {
            (true, Some(run)) if joins => current = Some(run.start..word.end),
            (true, prev) => {
                runs.extend(prev);
                current = Some(word.start..word.end);
            }
            (false, prev) => runs.extend(prev),
        }
    }
    runs.extend(current);
    runs
}

fn at_sentence_start(text: &str, words: &[Term], idx: usize) -> bool {
    if idx == 0 {
        return true;
    }
    let gap = &text[words[idx - 1].end..words[idx].start];
    gap.chars().any(|c| matches!(c, '.' | '!' | '?'))
}

/// A masked span, by byte offsets into the original question.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct MaskedSpan {
    pub start: usize,
    pub end: usize,
    pub entity_type: String,
    pub original_text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MaskedQuestion {
    pub text: String,
    pub spans: Vec<MaskedSpan>,
    /// Byte ranges of inserted tags within `text`.
    tag_ranges: Vec<Range<usize>>,
}

impl MaskedQuestion {
    /// Terms of the masked text, excluding the inserted entity tags.
    pub fn match_terms(&self) -> Vec<Term> {
        question_terms(&self.text)
            .into_iter()
            .filter(|t| {
                !self
                    .tag_ranges
                    .iter()
                    .any(|r| r.start < t.end && t.start < r.end)
            })
            .collect()
    }
}

/// Replaces each recognized span with its entity type tag.
pub fn mask_entities(
    question: &str,
    recognizer: &dyn EntityRecognizer,
) -> Result<MaskedQuestion, PruneError> {
    if question.trim().is_empty() {
        return Err(PruneError::EmptyQuestion);
    }
    let mut found = recognizer
        .recognize(question)
        .map_err(|source| PruneError::Recognizer {
            question: question.to_string(),
            source,
        })?;
    found.sort_by_key(|s| (s.start, s.end));

    let mut text = String::with_capacity(question.len());
    let mut spans = Vec::with_capacity(found.len());
    let mut tag_ranges = Vec::with_capacity(found.len());
    let mut cursor = 0;
    for span in found {
        let valid = span.start < span.end
            && span.start >= cursor
            && span.end <= question.len()
            && question.is_char_boundary(span.start)
            && question.is_char_boundary(span.end)
            && !span.entity_type.is_empty();
        if !valid {
            return Err(PruneError::InvalidSpan {
                question: question.to_string(),
                start: span.start,
                end: span.end,
            });
        }
        text.push_str(&question[cursor..span.start]);
        let tag_start = text.len();
        text.push_str(&span.entity_type);
        tag_ranges.push(tag_start..text.len());
        spans.push(MaskedSpan {
            start: span.start,
            end: span.end,
            original_text: question[span.start..span.end].to_string(),
            entity_type: span.entity_type,
        });
        cursor = span.end;
    }
    text.push_str(&question[cursor..]);
    Ok(MaskedQuestion {
        text,
        spans,
        tag_ranges,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn mask(q: &str) -> MaskedQuestion {
        mask_entities(q, &RuleBasedRecognizer).unwrap()
    }

    #[test]
    fn quoted_organization_is_masked() {
        let m = mask("List the articles that mention the organization 'Acme Group'.");
        assert_eq!(
            m.text,
            "List the articles that mention the organization 'ENTITY'."
        );
        assert_eq!(m.spans.len(), 1);
        assert_eq!(m.spans[0].original_text, "Acme Group");
        assert_eq!(m.spans[0].entity_type, "ENTITY");
    }

    #[test]
    fn no_entities_is_identity() {
        let q = "how many articles mention an organization?";
        let m = mask(q);
        assert_eq!(m.text, q);
        assert!(m.spans.is_empty());
    }

    #[test]
    fn energy_token_disappears() {
        let m = mask("List the articles that mention the organization 'Acme Energy'.");
        assert!(!m.text.contains("Energy"));
        assert!(m
            .match_terms()
            .iter()
            .all(|t| t.text != "energy" && t.text != "entity"));
    }

    #[test]
    fn capitalized_runs_skip_sentence_start() {
        let m = mask("Which articles mention Globex Corporation and Initech? Show them.");
        let originals: Vec<_> = m.spans.iter().map(|s| s.original_text.as_str()).collect();
        assert_eq!(originals, ["Globex Corporation", "Initech"]);
        assert_eq!(
            m.text,
            "Which articles mention ENTITY and ENTITY? Show them."
        );
    }

    #[test]
    fn apostrophes_do_not_open_quotes() {
        let m = mask("what is the organization's revenue and the ceo's age?");
        assert!(m.spans.is_empty(), "{:?}", m.spans);
    }

    #[test]
    fn double_and_typographic_quotes() {
        let m = mask("find \"solar farm\" and \u{201C}wind park\u{201D} records");
        let originals: Vec<_> = m.spans.iter().map(|s| s.original_text.as_str()).collect();
        assert_eq!(originals, ["solar farm", "wind park"]);
    }

    #[test]
    fn empty_question_is_rejected() {
        assert!(matches!(
            mask_entities("   ", &RuleBasedRecognizer),
            Err(PruneError::EmptyQuestion)
        ));
    }

    struct Broken;
    impl EntityRecognizer for Broken {
        fn recognize(&self, _: &str) -> Result<Vec<EntitySpan>, ProviderError> {
            Err(ProviderError::InvalidInput("boom".into()))
        }
    }

    struct Overlapping;
    impl EntityRecognizer for Overlapping {
        fn recognize(&self, _: &str) -> Result<Vec<EntitySpan>, ProviderError> {
            Ok(vec![
                EntitySpan {
                    start: 0,
                    end: 4,
                    entity_type: "ORG".into(),
                },
                EntitySpan {
                    start: 2,
                    end: 6,
                    entity_type: "ORG".into(),
                },
            ])
        }
    }

    #[test]
    fn recognizer_errors_carry_question() {
        match mask_entities("some question", &Broken) {
            Err(PruneError::Recognizer { question, .. }) => assert_eq!(question, "some question"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(
            mask_entities("abcdefgh", &Overlapping),
            Err(PruneError::InvalidSpan { .. })
        ));
    }

    #[test]
    fn custom_tags_are_substituted() {
        struct Fixed;
        impl EntityRecognizer for Fixed {
            fn recognize(&self, _: &str) -> Result<Vec<EntitySpan>, ProviderError> {
                Ok(vec![EntitySpan {
                    start: 4,
                    end: 9,
                    entity_type: "PERSON".into(),
                }])
            }
        }
        let m = mask_entities("who Alice knows", &Fixed).unwrap();
        assert_eq!(m.text, "who PERSON knows");
        let terms: Vec<_> = m.match_terms().into_iter().map(|t| t.text).collect();
        assert_eq!(terms, ["who", "knows"]);
    }
}
