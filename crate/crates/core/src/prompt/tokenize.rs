//! Token counting.

use crate::provider::ProviderError;

pub trait Tokenizer: Send + Sync {
    fn count(&self, text: &str) -> Result<usize, ProviderError>;
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum CharClass {
    Letter,
    Digit,
    Punct,
}

fn class_of(c: char) -> CharClass {
    if c.is_alphabetic() {
        CharClass::Letter
    } else if c.is_numeric() {
        CharClass::Digit
    } else {
        CharClass::Punct
    }
}

/// Splits on whitespace, then at every letter/digit/punctuation class
/// transition: `MATCH (n) RETURN n.name` ->
/// `MATCH ( n ) RETURN n . name`.
pub fn split_tokens(text: &str) -> Vec<&str> {
    let mut pieces = Vec::new();
    for chunk in text.split_whitespace() {
        let mut start = 0;
        let mut prev = None;
        for (i, c) in chunk.char_indices() {
            let class = class_of(c);
            if prev.is_some_and(|p| p != class) {
                pieces.push(&chunk[start..i]);
                start = i;
            }
            prev = Some(class);
        }
        pieces.push(&chunk[start..]);
    }
    pieces
}

/// The built-in class-transition tokenizer.
#[derive(Debug, Clone, Copy, Default)]
pub struct ClassTokenizer;

impl Tokenizer for ClassTokenizer {
    fn count(&self, text: &str) -> Result<usize, ProviderError> {
        Ok(count_tokens(text))
    }
}

pub fn count_tokens(text: &str) -> usize {
    split_tokens(text).len()
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn empty_is_zero() {
        assert_eq!(count_tokens(""), 0);
        assert_eq!(count_tokens(" \n\t "), 0);
    }

    #[test]
    fn cypher_pieces() {
        assert_eq!(
            split_tokens("MATCH (n) RETURN n"),
            ["MATCH", "(", "n", ")", "RETURN", "n"]
        );
        assert_eq!(count_tokens("MATCH (n) RETURN n"), 6);
        assert_eq!(
            split_tokens("(:Person)-[:HAS_CEO]->(x2)"),
            ["(:", "Person", ")-[:", "HAS", "_", "CEO", "]->(", "x", "2", ")"]
        );
        assert_eq!(split_tokens("année 2024"), ["année", "2024"]);
    }

    proptest! {
        #[test]
        fn whitespace_is_a_hard_boundary(a in "\\PC{0,40}", b in "\\PC{0,40}") {
            let joined = format!("{a} {b}");
            prop_assert_eq!(count_tokens(&joined), count_tokens(&a) + count_tokens(&b));
        }

        #[test]
        fn pieces_cover_non_whitespace(s in "\\PC{0,60}") {
            let rebuilt: String = split_tokens(&s).concat();
            let expected: String = s.chars().filter(|c| !c.is_whitespace()).collect();
            prop_assert_eq!(rebuilt, expected);
        }
    }
}
