//! Structured command reports.

use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Finding {
    pub kind: String,
    pub failure: bool,
    pub message: String,
    #[serde(skip_serializing_if = "Value::is_null")]
    pub data: Value,
}

impl Finding {
    pub fn info(kind: &str, message: impl Into<String>, data: Value) -> Self {
        Self {
            kind: kind.into(),
            failure: false,
            message: message.into(),
            data,
        }
    }

    pub fn failure(kind: &str, message: impl Into<String>, data: Value) -> Self {
        Self {
            kind: kind.into(),
            failure: true,
            message: message.into(),
            data,
        }
    }
}

/// Result of one command. `pass` holds exactly when no finding is a
/// failure. `runtime_ms` is only filled in on request so that reports stay
/// byte-identical across runs.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub command: String,
    pub inputs_digest: String,
    pub pass: bool,
    pub details: Vec<Finding>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub runtime_ms: Option<u64>,
}

impl Report {
    pub fn new(command: &str, inputs_digest: String, details: Vec<Finding>) -> Self {
        Self {
            command: command.into(),
            inputs_digest,
            pass: details.iter().all(|f| !f.failure),
            details,
            runtime_ms: None,
        }
    }

    pub fn exit_code(&self) -> i32 {
        if self.pass {
            0
        } else {
            1
        }
    }
}

/// SHA-256 over length-prefixed parts, hex encoded.
pub fn digest<'a>(parts: impl IntoIterator<Item = &'a [u8]>) -> String {
    let mut h = Sha256::new();
    for p in parts {
        h.update((p.len() as u64).to_le_bytes());
        h.update(p);
    }
    hex::encode(h.finalize())
}
