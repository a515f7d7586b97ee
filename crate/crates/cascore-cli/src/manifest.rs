//! Run manifests: every output directory gets a manifest.json recording the
//! command, the fully resolved configuration and sha256 digests of the
//! inputs, so a run can be reproduced byte for byte.

use serde::Serialize;
use sha2::{Digest, Sha256};
use std::fs;
use std::path::Path;

use crate::commands::Failure;

#[derive(Serialize)]
pub struct InputDigest {
    pub path: String,
    pub sha256: String,
}

#[derive(Serialize)]
pub struct RunManifest {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub seed: Option<u64>,
    pub config: serde_json::Value,
    pub inputs: Vec<InputDigest>,
}

impl RunManifest {
    pub fn new(command: &'static str, seed: Option<u64>, config: serde_json::Value) -> Self {
        RunManifest {
            tool: "cascore",
            version: env!("CARGO_PKG_VERSION"),
            command,
            seed,
            config,
            inputs: Vec::new(),
        }
    }

    pub fn add_input(&mut self, path: &Path, contents: &str) {
        let mut hasher = Sha256::new();
        hasher.update(contents.as_bytes());
        self.inputs.push(InputDigest {
            path: path.display().to_string(),
            sha256: format!("{:x}", hasher.finalize()),
        });
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("manifest serializes");
        s.push('\n');
        s
    }
}

/// Write the named files plus manifest.json into `dir`, or print the primary
/// (first) file to stdout when `stdout` is set.
pub fn emit(
    dir: &Path,
    stdout: bool,
    manifest: &RunManifest,
    files: &[(&str, String)],
) -> Result<(), Failure> {
    if stdout {
        if let Some((_, body)) = files.first() {
            print!("{body}");
        }
        return Ok(());
    }
    fs::create_dir_all(dir)
        .map_err(|e| Failure::Input(format!("cannot create {}: {e}", dir.display())))?;
    let write = |name: &str, body: &str| {
        let path = dir.join(name);
        fs::write(&path, body)
            .map_err(|e| Failure::Input(format!("cannot write {}: {e}", path.display())))
    };
    write("manifest.json", &manifest.to_json())?;
    for (name, body) in files {
        write(name, body)?;
    }
    Ok(())
}
