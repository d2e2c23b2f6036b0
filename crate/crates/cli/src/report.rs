use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use stategeom::format::CounterFile;
use stategeom::{decimal, Counter, ExactScalar};

/// Machine-readable output of one run.
#[derive(Debug, Serialize)]
pub struct RunReport {
    pub command: String,
    pub input_digest: String,
    pub results: Value,
    pub version: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timing_ms: Option<f64>,
}

/// SHA-256 over the normalised arguments and the bytes of every input file.
#[derive(Default)]
pub struct InputDigest {
    hasher: Sha256,
}

impl InputDigest {
    pub fn arg(&mut self, text: &str) {
        self.hasher.update((text.len() as u64).to_le_bytes());
        self.hasher.update(text.as_bytes());
    }

    pub fn file(&mut self, bytes: &[u8]) {
        self.hasher.update((bytes.len() as u64).to_le_bytes());
        self.hasher.update(bytes);
    }

    pub fn finish(self) -> String {
        hex::encode(self.hasher.finalize())
    }
}

/// `{"value": "p/q", "decimal": "0.5"}`.
pub fn rational(x: &ExactScalar) -> Value {
    json!({ "value": x.to_string(), "decimal": decimal(x) })
}

/// `p/q (decimal)`, or just `p` when the two agree.
pub fn rational_text(x: &ExactScalar) -> String {
    let exact = x.to_string();
    let approx = decimal(x);
    if exact == approx {
        exact
    } else {
        format!("{exact} ({approx})")
    }
}

pub fn point(x: &[ExactScalar]) -> Value {
    Value::from(x.iter().map(|v| v.to_string()).collect::<Vec<_>>())
}

pub fn counter(phi: &Counter<ExactScalar>) -> Value {
    serde_json::to_value(CounterFile::from_counter(phi)).expect("serializable")
}
