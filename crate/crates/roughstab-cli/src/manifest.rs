//! Run manifests: scenario echo, seeds, version, wall clock, and a content
//! digest per emitted file, so identical runs are verifiable byte for byte.

use crate::CliError;
use sha2::{Digest, Sha256};
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, PartialEq)]
pub struct FileRecord {
    pub name: String,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RunManifest {
    pub command: String,
    pub scenario_echo: String,
    pub seeds: Vec<u64>,
    pub version: String,
    pub wallclock_ms: u128,
    pub files: Vec<FileRecord>,
    pub out_dir: PathBuf,
}

impl RunManifest {
    pub fn new(command: &str, scenario_echo: String, out_dir: PathBuf) -> Self {
        Self {
            command: command.to_string(),
            scenario_echo,
            seeds: Vec::new(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            wallclock_ms: 0,
            files: Vec::new(),
            out_dir,
        }
    }

    /// Writes `bytes` into the run directory and records its digest.
    pub fn emit(&mut self, name: &str, bytes: &[u8]) -> Result<PathBuf, CliError> {
        let path = self.out_dir.join(name);
        std::fs::write(&path, bytes)?;
        let digest = Sha256::digest(bytes);
        self.files.push(FileRecord {
            name: name.to_string(),
            sha256: hex::encode(digest),
        });
        Ok(path)
    }

    pub fn digest_of(&self, name: &str) -> Option<&str> {
        self.files
            .iter()
            .find(|f| f.name == name)
            .map(|f| f.sha256.as_str())
    }

    pub fn render(&self) -> String {
        let mut out = String::new();
        out.push_str("# run manifest\n");
        out.push_str(&format!("version = {}\n", self.version));
        out.push_str(&format!("command = {}\n", self.command));
        out.push_str(&format!("wallclock_ms = {}\n", self.wallclock_ms));
        if !self.seeds.is_empty() {
            let seeds: Vec<String> = self.seeds.iter().map(|s| s.to_string()).collect();
            out.push_str(&format!("seeds = {}\n", seeds.join(",")));
        }
        for f in &self.files {
            out.push_str(&format!("file = {} sha256={}\n", f.name, f.sha256));
        }
        out.push_str("# scenario echo\n");
        for line in self.scenario_echo.lines() {
            out.push_str(&format!("#   {line}\n"));
        }
        out
    }

    /// Writes `manifest.txt` into the run directory.
    pub fn write(&self) -> Result<PathBuf, CliError> {
        let path = self.out_dir.join("manifest.txt");
        std::fs::write(&path, self.render())?;
        Ok(path)
    }
}

pub fn ensure_dir(path: &Path) -> Result<(), CliError> {
    std::fs::create_dir_all(path)
        .map_err(|e| CliError::Config(format!("cannot create output dir {}: {e}", path.display())))
}
