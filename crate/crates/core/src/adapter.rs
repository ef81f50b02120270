//! Subprocess adapters for external providers.
//!
//! An adapter is an executable speaking newline-delimited JSON over
//! stdin/stdout: one request object per line in, one response object per
//! line out. Any response may instead be `{"error": "..."}`.
//!
//! | op          | request                              | response                                   |
//! |-------------|--------------------------------------|--------------------------------------------|
//! | `recognize` | `{"op","text"}`                      | `{"spans":[{"start","end","type"}]}`       |
//! | `embed`     | `{"op","term"}`                      | `{"vector":[f32]}`                         |
//! | `count`     | `{"op","text"}`                      | `{"count":n}`                              |
//! | `execute`   | `{"op","schema_id","cypher"}`        | `{"rows":[[string]]}`                      |
//!
//! Span offsets are character (not byte) positions. Each adapter handles one
//! request at a time; the wait for a response is bounded by
//! `SCHEMA_SCALPEL_ADAPTER_TIMEOUT_MS` (default 10000).

use std::io::{BufRead, BufReader, Write};
use std::path::Path;
use std::process::{Child, ChildStdin, Command, Stdio};
use std::sync::mpsc::{self, Receiver, RecvTimeoutError};
use std::sync::Mutex;
use std::thread;
use std::time::Duration;

use serde::de::DeserializeOwned;
use serde::Deserialize;
use serde_json::{json, Value};

use crate::dataset::ResultSet;
use crate::eval::QueryExecutor;
use crate::prompt::Tokenizer;
use crate::provider::ProviderError;
use crate::prune::embed::Embedder;
use crate::prune::ner::{EntityRecognizer, EntitySpan};

pub const TIMEOUT_ENV: &str = "SCHEMA_SCALPEL_ADAPTER_TIMEOUT_MS";
pub const DEFAULT_TIMEOUT: Duration = Duration::from_millis(10_000);

/// Adapter wait bound from the environment, falling back to the default when
/// unset or unparsable.
pub fn timeout_from_env() -> Duration {
    std::env::var(TIMEOUT_ENV)
        .ok()
        .and_then(|v| v.trim().parse::<u64>().ok())
        .map_or(DEFAULT_TIMEOUT, Duration::from_millis)
}

struct Channel {
    child: Child,
    stdin: ChildStdin,
    lines: Receiver<std::io::Result<String>>,
    broken: bool,
}

/// A running adapter process.
pub struct AdapterProcess {
    program: String,
    timeout: Duration,
    channel: Mutex<Channel>,
}

impl AdapterProcess {
    pub fn spawn(path: impl AsRef<Path>) -> Result<Self, ProviderError> {
        Self::spawn_with_timeout(path, timeout_from_env())
    }

    pub fn spawn_with_timeout(
        path: impl AsRef<Path>,
        timeout: Duration,
    ) -> Result<Self, ProviderError> {
        let path = path.as_ref();
        let program = path.display().to_string();
        let mut child = Command::new(path)
            .stdin(Stdio::piped())
            .stdout(Stdio::piped())
            .stderr(Stdio::inherit())
            .spawn()
            .map_err(|e| ProviderError::Adapter {
                program: program.clone(),
                message: format!("failed to start: {e}"),
            })?;
        let stdin = child.stdin.take().expect("stdin is piped");
        let stdout = child.stdout.take().expect("stdout is piped");
        let (tx, rx) = mpsc::channel();
        thread::spawn(move || {
            for line in BufReader::new(stdout).lines() {
                if tx.send(line).is_err() {
                    break;
                }
            }
        });
        Ok(AdapterProcess {
            program,
            timeout,
            channel: Mutex::new(Channel {
                child,
                stdin,
                lines: rx,
                broken: false,
            }),
        })
    }

    fn fail(&self, message: impl Into<String>) -> ProviderError {
        ProviderError::Adapter {
            program: self.program.clone(),
            message: message.into(),
        }
    }

    /// Sends one request and waits for its response line. After a timeout or
    /// a closed pipe the adapter is unusable; later calls fail immediately.
    pub fn request(&self, request: &Value) -> Result<Value, ProviderError> {
        let mut ch = self.channel.lock().unwrap_or_else(|p| p.into_inner());
        if ch.broken {
            return Err(self.fail("adapter is no longer usable after an earlier failure"));
        }
        let mut line = serde_json::to_string(request).expect("request serializes");
        line.push('\n');
        if let Err(e) = ch
            .stdin
            .write_all(line.as_bytes())
            .and_then(|_| ch.stdin.flush())
        {
            ch.broken = true;
            return Err(self.fail(format!("write failed: {e}")));
        }
        let reply = match ch.lines.recv_timeout(self.timeout) {
            Ok(Ok(reply)) => reply,
            Ok(Err(e)) => {
                ch.broken = true;
                return Err(self.fail(format!("read failed: {e}")));
            }
            Err(RecvTimeoutError::Timeout) => {
                ch.broken = true;
                let _ = ch.child.kill();
                return Err(ProviderError::Timeout {
                    program: self.program.clone(),
                    timeout: self.timeout,
                });
            }
            Err(RecvTimeoutError::Disconnected) => {
                ch.broken = true;
                return Err(self.fail("adapter exited"));
            }
        };
        let value: Value = serde_json::from_str(&reply)
            .map_err(|e| self.fail(format!("malformed response {reply:?}: {e}")))?;
        if let Some(err) = value.get("error") {
            let message = err.as_str().map_or_else(|| err.to_string(), str::to_string);
            return Err(self.fail(message));
        }
        Ok(value)
    }

    fn request_as<T: DeserializeOwned>(&self, request: &Value) -> Result<T, ProviderError> {
        let value = self.request(request)?;
        serde_json::from_value(value)
            .map_err(|e| self.fail(format!("unexpected response shape: {e}")))
    }
}

impl Drop for AdapterProcess {
    fn drop(&mut self) {
        let ch = self.channel.get_mut().unwrap_or_else(|p| p.into_inner());
        let _ = ch.child.kill();
        let _ = ch.child.wait();
    }
}

impl std::fmt::Debug for AdapterProcess {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("AdapterProcess")
            .field("program", &self.program)
            .field("timeout", &self.timeout)
            .finish_non_exhaustive()
    }
}

#[derive(Deserialize)]
struct WireSpan {
    start: usize,
    end: usize,
    #[serde(rename = "type")]
    entity_type: String,
}

#[derive(Deserialize)]
struct SpansReply {
    spans: Vec<WireSpan>,
}

#[derive(Deserialize)]
struct VectorReply {
    vector: Vec<f32>,
}

#[derive(Deserialize)]
struct CountReply {
    count: usize,
}

#[derive(Deserialize)]
struct RowsReply {
    rows: ResultSet,
}

/// Byte offset of the `idx`-th character; `idx == char count` maps to the end.
fn char_to_byte(text: &str, idx: usize) -> Option<usize> {
    text.char_indices()
        .map(|(b, _)| b)
        .chain(std::iter::once(text.len()))
        .nth(idx)
}

impl EntityRecognizer for AdapterProcess {
    fn recognize(&self, text: &str) -> Result<Vec<EntitySpan>, ProviderError> {
        let reply: SpansReply = self.request_as(&json!({"op": "recognize", "text": text}))?;
        reply
            .spans
            .into_iter()
            .map(|s| {
                let start = char_to_byte(text, s.start);
                let end = char_to_byte(text, s.end);
                match (start, end) {
                    (Some(start), Some(end)) => Ok(EntitySpan {
                        start,
                        end,
                        entity_type: s.entity_type,
                    }),
                    _ => Err(self.fail(format!("span {}..{} out of bounds", s.start, s.end))),
                }
            })
            .collect()
    }
}

impl Embedder for AdapterProcess {
    fn embed(&self, term: &str) -> Result<Vec<f32>, ProviderError> {
        if term.is_empty() {
            return Err(ProviderError::InvalidInput(
                "cannot embed an empty term".into(),
            ));
        }
        let reply: VectorReply = self.request_as(&json!({"op": "embed", "term": term}))?;
        Ok(reply.vector)
    }
}

impl Tokenizer for AdapterProcess {
    fn count(&self, text: &str) -> Result<usize, ProviderError> {
        let reply: CountReply = self.request_as(&json!({"op": "count", "text": text}))?;
        Ok(reply.count)
    }
}

impl QueryExecutor for AdapterProcess {
    fn execute(&self, schema_id: &str, cypher: &str) -> Result<ResultSet, ProviderError> {
        let reply: RowsReply = self.request_as(&json!({
            "op": "execute",
            "schema_id": schema_id,
            "cypher": cypher,
        }))?;
        Ok(reply.rows)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn char_offsets_convert() {
        let t = "été ok";
        assert_eq!(char_to_byte(t, 0), Some(0));
        assert_eq!(char_to_byte(t, 1), Some(2));
        assert_eq!(char_to_byte(t, 3), Some(5));
        assert_eq!(char_to_byte(t, 6), Some(t.len()));
        assert_eq!(char_to_byte(t, 7), None);
    }

    #[test]
    fn missing_program_fails_to_spawn() {
        let err = AdapterProcess::spawn("/nonexistent/adapter-binary").unwrap_err();
        assert!(matches!(err, ProviderError::Adapter { .. }));
    }
}
