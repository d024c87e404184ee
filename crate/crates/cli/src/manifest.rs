//! Run manifests: config echo, input hashes, tool version, and
//! per-operation timings. Payload files are byte-stable across reruns;
//! the manifest's timings are not, and are the only varying part.

use std::path::{Path, PathBuf};
use std::time::Instant;

use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::{Failure, RunResult};

#[derive(Serialize)]
pub struct InputHash {
    pub path: String,
    pub sha256: String,
}

#[derive(Serialize)]
pub struct OperationRecord {
    pub operation: String,
    pub elapsed_ms: f64,
}

#[derive(Serialize)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub command: String,
    pub config: serde_json::Value,
    pub inputs: Vec<InputHash>,
    pub operations: Vec<OperationRecord>,
    pub outputs: Vec<String>,
}

impl RunManifest {
    pub fn new<C: Serialize>(command: &str, config: &C) -> Self {
        Self {
            tool: "desprox".into(),
            version: env!("CARGO_PKG_VERSION").into(),
            command: command.into(),
            config: serde_json::to_value(config).unwrap_or(serde_json::Value::Null),
            inputs: Vec::new(),
            operations: Vec::new(),
            outputs: Vec::new(),
        }
    }

    pub fn record_input(&mut self, path: &Path) -> RunResult<()> {
        let bytes = std::fs::read(path)
            .map_err(|e| Failure::Validation(format!("cannot read `{}`: {e}", path.display())))?;
        let digest = Sha256::digest(&bytes);
        let hex: String = digest.iter().map(|b| format!("{b:02x}")).collect();
        self.inputs.push(InputHash {
            path: path.display().to_string(),
            sha256: hex,
        });
        Ok(())
    }

    /// Times a computation and records it under `operation`.
    pub fn timed<T>(&mut self, operation: &str, f: impl FnOnce() -> T) -> T {
        let started = Instant::now();
        let value = f();
        self.operations.push(OperationRecord {
            operation: operation.into(),
            elapsed_ms: started.elapsed().as_secs_f64() * 1e3,
        });
        value
    }

    /// Writes `contents` under the output directory and records the file.
    pub fn write_output(&mut self, dir: &Path, name: &str, contents: &str) -> RunResult<PathBuf> {
        std::fs::create_dir_all(dir)
            .map_err(|e| Failure::Computation(format!("cannot create `{}`: {e}", dir.display())))?;
        let path = dir.join(name);
        std::fs::write(&path, contents)
            .map_err(|e| Failure::Computation(format!("cannot write `{}`: {e}", path.display())))?;
        self.outputs.push(name.to_string());
        Ok(path)
    }

    pub fn finish(&self, dir: Option<&Path>) -> RunResult<()> {
        if let Some(dir) = dir {
            let json = serde_json::to_string_pretty(self).map_err(Failure::computation)?;
            std::fs::create_dir_all(dir).map_err(|e| {
                Failure::Computation(format!("cannot create `{}`: {e}", dir.display()))
            })?;
            std::fs::write(dir.join("manifest.json"), json)
                .map_err(|e| Failure::Computation(format!("cannot write manifest: {e}")))?;
        }
        Ok(())
    }
}
