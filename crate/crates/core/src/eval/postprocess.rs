//! Cleanup of raw model output into a bare Cypher statement.

const FENCE: &str = "```";
const OUTPUT_ECHO: &str = "cypher output:";

/// Strips surrounding whitespace, a code fence pair (with optional language
/// tag), a leading `cypher:` / `cypher` label, and an echoed `Cypher output:`
/// cue. Applied to a fixpoint, so the result is stable under re-application.
/// An empty result means the generation produced no query.
pub fn postprocess_cypher(raw: &str) -> String {
    let mut current = raw.trim().to_string();
    loop {
        let next = strip_once(&current);
        if next == current {
            return current;
        }
        current = next;
    }
}

fn strip_once(text: &str) -> String {
    let text = text.trim();
    let text = strip_fences(text).trim();
    let text = strip_label(text).trim();
    strip_echo(text).trim().to_string()
}

fn strip_fences(text: &str) -> &str {
    let mut text = text;
    if let Some(rest) = text.strip_prefix(FENCE) {
        // Drop the rest of the opening line when it is a bare language tag.
        text = match rest.split_once('\n') {
            Some((tag, body)) if is_language_tag(tag) => body,
            _ => rest,
        };
    }
    text.strip_suffix(FENCE).unwrap_or(text)
}

fn is_language_tag(tag: &str) -> bool {
    let tag = tag.trim();
    tag.chars()
        .all(|c| c.is_alphanumeric() || matches!(c, '-' | '_' | '+'))
}

fn strip_label(text: &str) -> &str {
    if let Some(rest) = strip_prefix_ci(text, "cypher:") {
        return rest;
    }
    match text.split_once('\n') {
        Some((first, rest)) if first.trim().eq_ignore_ascii_case("cypher") => rest,
        None if text.eq_ignore_ascii_case("cypher") => "",
        _ => text,
    }
}

fn strip_echo(text: &str) -> &str {
    if let Some(rest) = strip_prefix_ci(text, OUTPUT_ECHO) {
        return rest;
    }
    let n = OUTPUT_ECHO.len();
    if text.len() >= n
        && text.is_char_boundary(text.len() - n)
        && text[text.len() - n..].eq_ignore_ascii_case(OUTPUT_ECHO)
    {
        return &text[..text.len() - n];
    }
    text
}

fn strip_prefix_ci<'a>(text: &'a str, prefix: &str) -> Option<&'a str> {
    let head = text.get(..prefix.len())?;
    head.eq_ignore_ascii_case(prefix)
        .then(|| &text[prefix.len()..])
}
