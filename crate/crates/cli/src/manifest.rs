use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::output::sha256_file;
use crate::CliError;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct OutputFile {
    /// Relative to the run directory.
    pub file: String,
    pub bytes: u64,
    pub sha256: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunManifest {
    pub command: String,
    pub parameters: serde_json::Value,
    pub seeds: Vec<u64>,
    pub tool_version: String,
    pub started: String,
    pub finished: String,
    pub outputs: Vec<OutputFile>,
}

impl RunManifest {
    pub fn describe(dir: &Path, files: &[String]) -> Result<Vec<OutputFile>, CliError> {
        files
            .iter()
            .map(|f| {
                let path = dir.join(f);
                let bytes = std::fs::metadata(&path).map_err(|e| CliError::io(&path, e))?.len();
                Ok(OutputFile { file: f.clone(), bytes, sha256: sha256_file(&path)? })
            })
            .collect()
    }

    /// Every listed file exists and still has the recorded digest.
    pub fn verify(&self, dir: &Path) -> Result<bool, CliError> {
        for o in &self.outputs {
            let path = dir.join(&o.file);
            if !path.exists() || sha256_file(&path)? != o.sha256 {
                return Ok(false);
            }
        }
        Ok(true)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        serde_json::from_str(&text).map_err(CliError::Json)
    }
}
