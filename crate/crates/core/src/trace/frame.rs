use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum CallKind {
    Call,
    Delegatecall,
    Staticcall,
    Create,
}

/// One frame of a call-tracer style trace.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TraceFrame {
    pub from_address: String,
    pub to_address: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub selector: Option<String>,
    pub call_kind: CallKind,
    pub depth: u32,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<TraceFrame>,
}

/// A transaction hash paired with its root frame; the unit stored per
/// JSON file or per JSON-lines row.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TransactionTrace {
    pub tx_hash: String,
    pub trace: TraceFrame,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum TraceError {
    #[error("{path}: {message}")]
    Malformed { path: String, message: String },
    #[error("line {line}: {message}")]
    Json { line: usize, message: String },
}

fn json_error(err: serde_json::Error, line_offset: usize) -> TraceError {
    TraceError::Json {
        line: err.line() + line_offset,
        message: err.to_string(),
    }
}

/// Parse a single-transaction JSON document.
pub fn parse_trace_document(text: &str) -> Result<TransactionTrace, TraceError> {
    serde_json::from_str(text).map_err(|e| json_error(e, 0))
}

/// Parse JSON-lines input, one transaction per non-blank line.
pub fn parse_trace_lines(text: &str) -> Result<Vec<TransactionTrace>, TraceError> {
    text.lines()
        .enumerate()
        .filter(|(_, l)| !l.trim().is_empty())
        .map(|(i, l)| {
            serde_json::from_str(l).map_err(|e| TraceError::Json {
                line: i + 1,
                message: e.to_string(),
            })
        })
        .collect()
}
