//! `relpub.yml` and the CI-provided defaults that sit below it.
//!
//! Precedence is flag, then `RELPUB_*` variable (both handled by clap),
//! then the configuration file, then GitLab CI variables.

use std::path::{Path, PathBuf};

use relpub_core::archive::AdapterKind;
use relpub_core::checksum::Algorithm;
use serde::Deserialize;

use crate::error::CliError;

pub const CONFIG_FILE_NAME: &str = "relpub.yml";

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FileConfig {
    pub metadata: Option<PathBuf>,
    pub contributors: Option<PathBuf>,
    pub assets: Option<PathBuf>,
    pub output_dir: Option<PathBuf>,
    pub changelog: Option<PathBuf>,
    pub package_name: Option<String>,
    pub release_page_url: Option<String>,
    #[serde(default)]
    pub gitlab: GitLabSection,
    #[serde(default)]
    pub archive: ArchiveSection,
    #[serde(default)]
    pub bag: BagSection,
    #[serde(default)]
    pub sync: SyncSection,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GitLabSection {
    pub url: Option<String>,
    pub project_id: Option<serde_yaml::Value>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ArchiveSection {
    pub url: Option<String>,
    pub adapter: Option<AdapterKind>,
    pub state_file: Option<PathBuf>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BagSection {
    pub source_organization: Option<String>,
    pub contact_email: Option<String>,
    pub algorithms: Option<Vec<Algorithm>>,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SyncSection {
    pub site: Option<PathBuf>,
    pub repo: Option<PathBuf>,
    pub pipeline: Option<String>,
}

/// The loaded file plus the directory its relative paths are based on.
#[derive(Debug, Default)]
pub struct Config {
    pub file: FileConfig,
    base: PathBuf,
}

impl Config {
    pub fn load(explicit: Option<&Path>) -> Result<Self, CliError> {
        let path = match explicit {
            Some(p) => p.to_path_buf(),
            None => {
                let default = PathBuf::from(CONFIG_FILE_NAME);
                if !default.is_file() {
                    return Ok(Self::default());
                }
                default
            }
        };
        let text = std::fs::read_to_string(&path)
            .map_err(|e| CliError::io(format!("cannot read {}: {e}", path.display())))?;
        let file: FileConfig = if text.trim().is_empty() {
            FileConfig::default()
        } else {
            serde_yaml::from_str(&text)
                .map_err(|e| CliError::config(format!("{}: {e}", path.display())))?
        };
        let base = path.parent().map(Path::to_path_buf).unwrap_or_default();
        Ok(Self { file, base })
    }

    /// Resolves a path from the file against the file's directory.
    pub fn path(&self, value: &Option<PathBuf>) -> Option<PathBuf> {
        value.as_ref().map(|p| if p.is_absolute() { p.clone() } else { self.base.join(p) })
    }

    pub fn project_id(&self) -> Option<String> {
        match self.file.gitlab.project_id.as_ref()? {
            serde_yaml::Value::String(s) => Some(s.clone()),
            serde_yaml::Value::Number(n) => Some(n.to_string()),
            _ => None,
        }
    }
}

/// A non-empty CI variable.
pub fn ci(name: &str) -> Option<String> {
    std::env::var(name).ok().filter(|v| !v.trim().is_empty())
}

pub fn token(name: &str) -> Option<String> {
    std::env::var(name).ok().filter(|v| !v.is_empty())
}

pub fn first<T>(candidates: impl IntoIterator<Item = Option<T>>) -> Option<T> {
    candidates.into_iter().flatten().next()
}
