use std::fmt;
use std::fs::File;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::yaml::{self, text};
use super::MetadataError;
use crate::checksum;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AssetRole {
    SourceTarball,
    DockerImage,
    Rpm,
    Deb,
    MacosPkg,
    UserManualPdf,
    CompanionRevision,
    Other,
}

impl AssetRole {
    pub fn as_str(self) -> &'static str {
        match self {
            AssetRole::SourceTarball => "source-tarball",
            AssetRole::DockerImage => "docker-image",
            AssetRole::Rpm => "rpm",
            AssetRole::Deb => "deb",
            AssetRole::MacosPkg => "macos-pkg",
            AssetRole::UserManualPdf => "user-manual-pdf",
            AssetRole::CompanionRevision => "companion-revision",
            AssetRole::Other => "other",
        }
    }
}

impl fmt::Display for AssetRole {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// One release asset with its size and SHA-256 recorded at resolve time.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Asset {
    pub role: AssetRole,
    pub path: PathBuf,
    pub media_type: String,
    pub size: u64,
    pub sha256: String,
}

impl Asset {
    pub fn from_file(
        role: AssetRole,
        path: impl Into<PathBuf>,
        media_type: impl Into<String>,
    ) -> std::io::Result<Self> {
        let path = path.into();
        let size = std::fs::metadata(&path)?.len();
        let sha256 = checksum::sha256_file(&path)?;
        Ok(Self {
            role,
            path,
            media_type: media_type.into(),
            size,
            sha256,
        })
    }

    /// Final path component, used as the upload and payload file name.
    pub fn file_name(&self) -> String {
        self.path
            .file_name()
            .map(|n| n.to_string_lossy().into_owned())
            .unwrap_or_default()
    }
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AssetSet {
    pub assets: Vec<Asset>,
}

impl AssetSet {
    pub fn len(&self) -> usize {
        self.assets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.assets.is_empty()
    }

    pub fn iter(&self) -> std::slice::Iter<'_, Asset> {
        self.assets.iter()
    }

    pub fn push(&mut self, asset: Asset) {
        self.assets.push(asset);
    }

    pub fn total_size(&self) -> u64 {
        self.assets.iter().map(|a| a.size).sum()
    }
}

impl<'a> IntoIterator for &'a AssetSet {
    type Item = &'a Asset;
    type IntoIter = std::slice::Iter<'a, Asset>;

    fn into_iter(self) -> Self::IntoIter {
        self.assets.iter()
    }
}

#[derive(Deserialize)]
struct ManifestEntry {
    role: AssetRole,
    #[serde(deserialize_with = "text")]
    path: String,
    #[serde(default = "default_media_type", deserialize_with = "text")]
    media_type: String,
}

fn default_media_type() -> String {
    "application/octet-stream".into()
}

/// Reads an `ASSETS.yml` list of `{role, path, media_type}` entries and
/// resolves every path against `base_dir`.
///
/// All absent paths are reported together. Roles other than `other` may
/// appear only once.
pub fn resolve_assets(manifest_path: &Path, base_dir: &Path) -> Result<AssetSet, MetadataError> {
    let value = match yaml::read_value(manifest_path)? {
        serde_yaml::Value::Mapping(m) if m.is_empty() => serde_yaml::Value::Sequence(vec![]),
        other => other,
    };
    let entries: Vec<ManifestEntry> = yaml::from_value(manifest_path, value)?;

    let mut seen = Vec::new();
    for entry in &entries {
        if entry.role != AssetRole::Other {
            if seen.contains(&entry.role) {
                return Err(MetadataError::DuplicateRole(entry.role.to_string()));
            }
            seen.push(entry.role);
        }
    }

    let missing: Vec<String> = entries
        .iter()
        .filter(|e| File::open(base_dir.join(&e.path)).is_err())
        .map(|e| e.path.clone())
        .collect();
    if !missing.is_empty() {
        return Err(MetadataError::MissingAsset(missing));
    }

    let mut set = AssetSet::default();
    for entry in entries {
        let path = base_dir.join(&entry.path);
        let asset = Asset::from_file(entry.role, &path, entry.media_type).map_err(|source| {
            MetadataError::Io {
                path: path.clone(),
                source,
            }
        })?;
        set.push(asset);
    }
    Ok(set)
}
