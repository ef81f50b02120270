use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use serde_json::Value;

use crate::error::CliError;

/// Newline-delimited JSON writer. Rows carry a `generated_at` field only when
/// stamping is requested.
pub struct Jsonl {
    out: Option<BufWriter<File>>,
    stamp: Option<u64>,
}

impl Jsonl {
    pub fn open(path: Option<&Path>, stamp: bool) -> Result<Self, CliError> {
        let out = match path {
            Some(p) => {
                Some(BufWriter::new(File::create(p).map_err(|e| {
                    CliError::input(format!("{}: {e}", p.display()))
                })?))
            }
            None => None,
        };
        let stamp = stamp.then(|| {
            SystemTime::now()
                .duration_since(UNIX_EPOCH)
                .map_or(0, |d| d.as_secs())
        });
        Ok(Jsonl { out, stamp })
    }

    pub fn write(&mut self, mut row: Value) -> Result<(), CliError> {
        let Some(out) = self.out.as_mut() else {
            return Ok(());
        };
        if let (Some(ts), Value::Object(map)) = (self.stamp, &mut row) {
            map.insert("generated_at".into(), Value::from(ts));
        }
        serde_json::to_writer(&mut *out, &row).map_err(CliError::input)?;
        out.write_all(b"\n")?;
        Ok(())
    }

    pub fn finish(self) -> Result<(), CliError> {
        if let Some(mut out) = self.out {
            out.flush()?;
        }
        Ok(())
    }
}

/// Plain-text table; columns whose cells are all numeric align right.
pub fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let mut widths: Vec<usize> = header.iter().map(|h| h.len()).collect();
    let numeric: Vec<bool> = (0..header.len())
        .map(|i| !rows.is_empty() && rows.iter().all(|r| r[i].parse::<f64>().is_ok()))
        .collect();
    for row in rows {
        for (w, cell) in widths.iter_mut().zip(row) {
            *w = (*w).max(cell.chars().count());
        }
    }
    let line = |cells: Vec<&str>| -> String {
        let mut s = String::new();
        for (i, (cell, w)) in cells.iter().zip(&widths).enumerate() {
            if i > 0 {
                s.push_str("  ");
            }
            if numeric[i] {
                s.push_str(&format!("{cell:>w$}"));
            } else {
                s.push_str(&format!("{cell:<w$}"));
            }
        }
        s.trim_end().to_string()
    };
    let mut out = line(header.to_vec());
    out.push('\n');
    let rule: Vec<String> = widths.iter().map(|w| "-".repeat(*w)).collect();
    out.push_str(&line(rule.iter().map(String::as_str).collect()));
    out.push('\n');
    for row in rows {
        out.push_str(&line(row.iter().map(String::as_str).collect()));
        out.push('\n');
    }
    out
}
