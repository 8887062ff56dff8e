use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};

/// One named pass/fail line of a report.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub pass: bool,
    pub detail: String,
}

impl Check {
    pub fn new(name: impl Into<String>, pass: bool, detail: impl Into<String>) -> Self {
        Check {
            name: name.into(),
            pass,
            detail: detail.into(),
        }
    }
}

/// The JSON document every command prints. Object keys inside `results` are
/// sorted, so identical inputs give identical bytes.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Report {
    pub command: Vec<String>,
    pub inputs_digest: String,
    pub ring: String,
    pub seed: Option<u64>,
    pub depth: Option<usize>,
    pub results: Value,
    pub checks: Vec<Check>,
    pub pass: bool,
}

impl Report {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn parse(text: &str) -> serde_json::Result<Self> {
        serde_json::from_str(text)
    }
}

/// SHA-256 over the command words and the contents of the input files.
pub fn digest(command: &[String], inputs: &[(String, String)]) -> String {
    let mut h = Sha256::new();
    for word in command {
        h.update(word.as_bytes());
        h.update([0]);
    }
    for (name, contents) in inputs {
        h.update(name.as_bytes());
        h.update([0]);
        h.update(contents.as_bytes());
        h.update([0]);
    }
    hex::encode(h.finalize())
}
