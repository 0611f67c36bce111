use serde::Serialize;
use serde_json::Value;
use sha2::{Digest, Sha256};

use crate::input::InputFile;

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

/// Everything needed to reproduce one result file.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunManifest {
    pub toolkit: &'static str,
    pub version: &'static str,
    pub subcommand: String,
    pub parameters: Value,
    pub inputs: Vec<InputDigest>,
}

impl RunManifest {
    pub fn new(subcommand: &str, parameters: Value, inputs: &[InputFile]) -> Self {
        Self {
            toolkit: "ddr5sc",
            version: env!("CARGO_PKG_VERSION"),
            subcommand: subcommand.to_string(),
            parameters,
            inputs: inputs
                .iter()
                .map(|f| InputDigest {
                    path: f.path.display().to_string(),
                    sha256: hex::encode(Sha256::digest(&f.bytes)),
                    bytes: f.bytes.len(),
                })
                .collect(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }
}
