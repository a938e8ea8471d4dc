use std::collections::BTreeMap;

use serde::Serialize;
use sha2::{Digest, Sha256};

use relseq_core::TrainingConfig;

/// Everything needed to reproduce a training run. Timestamps live here and
/// never in the rule file.
#[derive(Serialize)]
pub struct RunManifest {
    pub tool_version: &'static str,
    pub config: TrainingConfig,
    /// Input path to SHA-256 of its bytes.
    pub inputs: BTreeMap<String, String>,
    pub rules_sha256: String,
    pub rules: usize,
    pub started_unix_secs: u64,
    pub duration_secs: f64,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}
