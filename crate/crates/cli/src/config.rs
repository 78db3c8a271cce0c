//! Optional default-path configuration, loaded from the file named by the
//! `WINDKG_CONFIG` environment variable. Command-line flags always win.

use anyhow::{Context, Result};
use serde::Deserialize;
use std::path::{Path, PathBuf};

#[derive(Debug, Default, Deserialize)]
pub struct Config {
    pub graph: Option<PathBuf>,
    pub phrases: Option<PathBuf>,
    pub model: Option<PathBuf>,
    pub out_dir: Option<PathBuf>,
    pub seed: Option<u64>,
}

impl Config {
    pub fn from_env() -> Self {
        let Some(path) = std::env::var_os("WINDKG_CONFIG") else {
            return Self::default();
        };
        match std::fs::read_to_string(&path)
            .map_err(anyhow::Error::from)
            .and_then(|text| serde_json::from_str(&text).map_err(anyhow::Error::from))
        {
            Ok(config) => config,
            Err(err) => {
                eprintln!(
                    "warning: ignoring config {}: {err}",
                    Path::new(&path).display()
                );
                Self::default()
            }
        }
    }

    /// Picks the flag value, then the config default, with an actionable
    /// error naming the missing flag.
    pub fn resolve(
        flag: Option<PathBuf>,
        fallback: &Option<PathBuf>,
        what: &str,
    ) -> Result<PathBuf> {
        flag.or_else(|| fallback.clone()).with_context(|| {
            format!("no {what} given: pass --{what} or set it in the WINDKG_CONFIG file")
        })
    }

    /// Relative output paths are placed under the configured out_dir.
    pub fn out_path(&self, path: PathBuf) -> PathBuf {
        match &self.out_dir {
            Some(dir) if path.is_relative() => dir.join(path),
            _ => path,
        }
    }

    pub fn seed_or(&self, flag: Option<u64>, default: u64) -> u64 {
        flag.or(self.seed).unwrap_or(default)
    }
}

pub fn read_file(path: &Path, what: &str) -> Result<String> {
    std::fs::read_to_string(path).with_context(|| format!("reading {what} {}", path.display()))
}

pub fn write_file(path: &Path, contents: &str, what: &str) -> Result<()> {
    if let Some(parent) = path.parent() {
        if !parent.as_os_str().is_empty() {
            std::fs::create_dir_all(parent)
                .with_context(|| format!("creating directory {}", parent.display()))?;
        }
    }
    std::fs::write(path, contents).with_context(|| format!("writing {what} {}", path.display()))
}
