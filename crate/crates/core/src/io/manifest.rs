//! Run manifests: enough provenance beside every output to reproduce it.

use std::fs::File;
use std::io::Read;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

pub const MANIFEST_SCHEMA: &str = "run-manifest/v1";

/// Digest of one input file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

/// Sidecar written beside every produced file: the exact command line, the
/// resolved parameters, input digests, and tool version.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub schema: String,
    pub tool: String,
    pub version: String,
    pub timestamp_utc: String,
    /// argv as invoked.
    pub command: Vec<String>,
    /// Fully resolved parameters (defaults filled in), command-specific.
    pub parameters: serde_json::Value,
    pub inputs: Vec<InputDigest>,
    /// Paths of the files this run produced.
    pub outputs: Vec<String>,
}

impl RunManifest {
    /// Builds a manifest for the current process invocation.
    pub fn new(parameters: serde_json::Value, inputs: Vec<InputDigest>, outputs: &[&Path]) -> Self {
        RunManifest {
            schema: MANIFEST_SCHEMA.to_string(),
            tool: "oscillodx".to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            timestamp_utc: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
            command: std::env::args().collect(),
            parameters,
            inputs,
            outputs: outputs.iter().map(|p| p.display().to_string()).collect(),
        }
    }

    /// Writes the manifest beside `primary_output` (see [`manifest_path_for`]).
    pub fn write_beside(&self, primary_output: &Path) -> Result<PathBuf> {
        let path = manifest_path_for(primary_output);
        let json = serde_json::to_string_pretty(self)?;
        std::fs::write(&path, json + "\n").map_err(|e| Error::io(&path, e))?;
        Ok(path)
    }
}

/// `report.json` → `report.json.manifest.json`. The suffix is appended to
/// the whole file name (never substituted for the extension) so two outputs
/// differing only in extension — `run.csv` and `run.json`, say — cannot
/// clobber each other's provenance.
pub fn manifest_path_for(output: &Path) -> PathBuf {
    let mut name = output.file_name().map_or_else(
        || std::ffi::OsString::from("output"),
        |n| n.to_os_string(),
    );
    name.push(".manifest.json");
    output.with_file_name(name)
}

/// Streaming SHA-256 of a file, lowercase hex.
pub fn sha256_hex_of_file(path: &Path) -> Result<String> {
    let mut file = File::open(path).map_err(|e| Error::io(path, e))?;
    let mut hasher = Sha256::new();
    let mut buf = [0u8; 65536];
    loop {
        let n = file.read(&mut buf).map_err(|e| Error::io(path, e))?;
        if n == 0 {
            break;
        }
        hasher.update(&buf[..n]);
    }
    Ok(format!("{:x}", hasher.finalize()))
}
