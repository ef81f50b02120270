//! Execution-based ExactMatch over result sets.

use crate::dataset::ResultSet;

const FIELD_SEPARATOR: char = '\u{1F}';

fn canonical_rows(rows: &ResultSet) -> Vec<String> {
    let mut out: Vec<String> = rows
        .iter()
        .map(|row| {
            let mut line = String::new();
            for (i, field) in row.iter().enumerate() {
                if i > 0 {
                    line.push(FIELD_SEPARATOR);
                }
                line.push_str(field);
            }
            line
        })
        .collect();
    out.sort_unstable();
    out
}

/// 1.0 when both result sets hold the same rows as a multiset (rows compared
/// as display strings after lexicographic sorting), else 0.0.
pub fn exact_match(candidate: &ResultSet, reference: &ResultSet) -> f64 {
    if candidate.len() == reference.len() && canonical_rows(candidate) == canonical_rows(reference)
    {
        1.0
    } else {
        0.0
    }
}
