//! Newline-delimited evaluation records.

use std::io::{BufRead, BufReader, Read};

use serde::{Deserialize, Serialize};
use thiserror::Error;

/// Execution output: rows of display strings.
pub type ResultSet = Vec<Vec<String>>;

#[derive(Debug, Error)]
pub enum DatasetError {
    #[error("line {line}: {message}")]
    Record { line: usize, message: String },
    #[error("failed to read dataset: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetRecord {
    pub question: String,
    pub schema_id: String,
    pub reference_cypher: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reference_result: Option<ResultSet>,
    /// Generated query under evaluation, when the dataset carries one.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidate_cypher: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub candidate_result: Option<ResultSet>,
}

/// One record per non-blank line, in input order. `schema_id` is not
/// resolved here.
pub fn load_dataset<R: Read>(source: R) -> Result<Vec<DatasetRecord>, DatasetError> {
    let mut records = Vec::new();
    for (idx, line) in BufReader::new(source).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let lineno = idx + 1;
        let record: DatasetRecord = serde_json::from_str(&line).map_err(|e| {
            let full = e.to_string();
            let suffix = format!(" at line {} column {}", e.line(), e.column());
            let message = match full.strip_suffix(&suffix) {
                Some(m) => format!("{m} (column {})", e.column()),
                None => full,
            };
            DatasetError::Record {
                line: lineno,
                message,
            }
        })?;
        for (field, value) in [
            ("question", &record.question),
            ("reference_cypher", &record.reference_cypher),
        ] {
            if value.trim().is_empty() {
                return Err(DatasetError::Record {
                    line: lineno,
                    message: format!("`{field}` must be non-empty"),
                });
            }
        }
        records.push(record);
    }
    Ok(records)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_stream() {
        assert!(load_dataset(&b""[..]).unwrap().is_empty());
    }

    #[test]
    fn keeps_input_order_and_skips_blank_lines() {
        let text = r#"{"question":"q1","schema_id":"s","reference_cypher":"MATCH (n) RETURN n"}

{"question":"q2","schema_id":"s","reference_cypher":"RETURN 1","reference_result":[["1"]]}
{"question":"q3","schema_id":"t","reference_cypher":"RETURN 2","candidate_cypher":"RETURN 2"}
"#;
        let recs = load_dataset(text.as_bytes()).unwrap();
        let qs: Vec<_> = recs.iter().map(|r| r.question.as_str()).collect();
        assert_eq!(qs, ["q1", "q2", "q3"]);
        assert_eq!(recs[1].reference_result, Some(vec![vec!["1".to_string()]]));
        assert_eq!(recs[2].candidate_cypher.as_deref(), Some("RETURN 2"));
    }

    #[test]
    fn missing_question_cites_line() {
        let text = concat!(
            r#"{"question":"q1","schema_id":"s","reference_cypher":"RETURN 1"}"#,
            "\n",
            r#"{"schema_id":"s","reference_cypher":"RETURN 1"}"#,
            "\n"
        );
        match load_dataset(text.as_bytes()) {
            Err(DatasetError::Record { line, message }) => {
                assert_eq!(line, 2);
                assert!(message.contains("question"), "{message}");
            }
            other => panic!("expected record error, got {other:?}"),
        }
    }

    #[test]
    fn empty_reference_is_rejected() {
        let text = r#"{"question":"q","schema_id":"s","reference_cypher":"  "}"#;
        assert!(matches!(
            load_dataset(text.as_bytes()),
            Err(DatasetError::Record { line: 1, .. })
        ));
    }
}
