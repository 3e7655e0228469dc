//! Run manifests: every command that writes an artifact records its exact
//! argument vector, parameter map, tool version, seed, input/output
//! digests, and wall time beside the first output, so any run can be
//! replayed and checked bit for bit.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub argv: Vec<String>,
    pub parameters: BTreeMap<String, String>,
    pub tool_version: String,
    pub rng_seed: Option<u64>,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
    pub wall_time_ms: u128,
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

pub fn sha256_file(path: &Path) -> std::io::Result<String> {
    Ok(sha256_hex(&std::fs::read(path)?))
}

pub fn manifest_path(first_output: &Path) -> PathBuf {
    let mut name = first_output.file_name().unwrap_or_default().to_os_string();
    name.push(".manifest.json");
    first_output.with_file_name(name)
}

/// Flatten an argument vector into a key/value map: leading bare words form
/// the command, `--flag value` pairs become entries, bare `--flag`s map to
/// "true".
pub fn parameter_map(argv: &[String]) -> BTreeMap<String, String> {
    let mut map = BTreeMap::new();
    let mut command_words: Vec<&str> = Vec::new();
    let mut i = 0;
    while i < argv.len() {
        let tok = &argv[i];
        if let Some(key) = tok.strip_prefix("--") {
            if i + 1 < argv.len() && !argv[i + 1].starts_with("--") {
                map.insert(key.to_string(), argv[i + 1].clone());
                i += 2;
            } else {
                map.insert(key.to_string(), "true".to_string());
                i += 1;
            }
        } else {
            command_words.push(tok);
            i += 1;
        }
    }
    map.insert("command".to_string(), command_words.join(" "));
    map
}
