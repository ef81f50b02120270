//! Question and schema-name normalization used by the matchers.

/// A lowercased question term with its byte range in the source text.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Term {
    pub text: String,
    pub start: usize,
    pub end: usize,
}

/// Splits on non-alphanumeric boundaries and lowercases.
pub fn question_terms(text: &str) -> Vec<Term> {
    let mut terms = Vec::new();
    let mut start = None;
    for (i, c) in text.char_indices() {
        match (c.is_alphanumeric(), start) {
            (true, None) => start = Some(i),
            (false, Some(s)) => {
                terms.push(make_term(text, s, i));
                start = None;
            }
            _ => {}
        }
    }
    if let Some(s) = start {
        terms.push(make_term(text, s, text.len()));
    }
    terms
}

fn make_term(text: &str, start: usize, end: usize) -> Term {
    Term {
        text: text[start..end].to_lowercase(),
        start,
        end,
    }
}

/// Splits a schema identifier into lowercase words on snake_case, kebab,
/// camelCase and acronym boundaries: `HAS_CEO` -> `has ceo`,
/// `capacityMw` -> `capacity mw`, `HTTPServer` -> `http server`.
pub fn name_words(name: &str) -> Vec<String> {
    let chars: Vec<char> = name.chars().collect();
    let mut words = Vec::new();
    let mut current = String::new();
    for (i, &c) in chars.iter().enumerate() {
        if !c.is_alphanumeric() {
            flush(&mut current, &mut words);
            continue;
        }
        if c.is_uppercase() && !current.is_empty() {
            let prev = chars[i - 1];
            let next_lower = chars.get(i + 1).is_some_and(|n| n.is_lowercase());
            if prev.is_lowercase() || prev.is_numeric() || (prev.is_uppercase() && next_lower) {
                flush(&mut current, &mut words);
            }
        }
        current.extend(c.to_lowercase());
    }
    flush(&mut current, &mut words);
    words
}

fn flush(current: &mut String, words: &mut Vec<String>) {
    if !current.is_empty() {
        words.push(std::mem::take(current));
    }
}

/// The word and its crude singular forms (trailing "s" / "es" removed).
fn folds(word: &str) -> impl Iterator<Item = &str> {
    let strip_s = word
        .strip_suffix('s')
        .filter(|stem| stem.chars().count() >= 2);
    let strip_es = word
        .strip_suffix("es")
        .filter(|stem| stem.chars().count() >= 2);
    std::iter::once(word).chain(strip_s).chain(strip_es)
}

/// Equality up to the singular/plural fold on both sides.
pub fn words_match(a: &str, b: &str) -> bool {
    folds(a).any(|fa| folds(b).any(|fb| fa == fb))
}

/// Finds the question phrase that exactly matches a schema name: either the
/// whole name (separators removed) equals a single term, or the name's word
/// sequence occurs contiguously among the terms.
pub fn exact_phrase(name: &str, terms: &[Term]) -> Option<String> {
    let words = name_words(name);
    if words.is_empty() {
        return None;
    }
    let joined: String = words.concat();
    if let Some(t) = terms.iter().find(|t| words_match(&t.text, &joined)) {
        return Some(t.text.clone());
    }
    if words.len() > 1 {
        for window in terms.windows(words.len()) {
            if window
                .iter()
                .zip(&words)
                .all(|(t, w)| words_match(&t.text, w))
            {
                let phrase: Vec<&str> = window.iter().map(|t| t.text.as_str()).collect();
                return Some(phrase.join(" "));
            }
        }
    }
    None
}

/// Normalized display form of a schema name: its words joined by spaces.
pub fn normalized_name(name: &str) -> String {
    name_words(name).join(" ")
}
