use std::collections::BTreeMap;
use std::fs::{File, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use super::ArchiveError;

pub const STATE_FILE_NAME: &str = ".relpub-state.json";

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct ReleaseState {
    pub dataset_id: String,
}

/// Dataset ids per release tag, so re-runs resume instead of creating
/// another draft.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct StateFile {
    #[serde(default)]
    pub releases: BTreeMap<String, ReleaseState>,
}

impl StateFile {
    pub fn load(path: &Path) -> Result<Self, ArchiveError> {
        match std::fs::read(path) {
            Ok(bytes) => serde_json::from_slice(&bytes).map_err(|e| ArchiveError::StateFile {
                path: path.to_path_buf(),
                message: e.to_string(),
            }),
            Err(e) if e.kind() == std::io::ErrorKind::NotFound => Ok(Self::default()),
            Err(e) => Err(ArchiveError::io(path, e)),
        }
    }

    pub fn dataset_for(&self, tag: &str) -> Option<&str> {
        self.releases.get(tag).map(|r| r.dataset_id.as_str())
    }

    pub fn record(&mut self, tag: &str, dataset_id: &str) {
        self.releases.insert(
            tag.to_string(),
            ReleaseState {
                dataset_id: dataset_id.to_string(),
            },
        );
    }

    /// Writes through a temporary file in the same directory.
    pub fn save(&self, path: &Path) -> Result<(), ArchiveError> {
        let dir = match path.parent() {
            Some(p) if !p.as_os_str().is_empty() => p.to_path_buf(),
            _ => PathBuf::from("."),
        };
        let mut tmp = tempfile::NamedTempFile::new_in(&dir).map_err(|e| ArchiveError::io(&dir, e))?;
        let mut text = serde_json::to_string_pretty(self).expect("state serializes");
        text.push('\n');
        tmp.write_all(text.as_bytes()).map_err(|e| ArchiveError::io(path, e))?;
        tmp.persist(path).map_err(|e| ArchiveError::io(path, e.error))?;
        Ok(())
    }
}

/// Exclusive advisory lock next to the state file, held for one deposit.
#[derive(Debug)]
pub struct StateLock {
    _file: File,
    path: PathBuf,
}

impl StateLock {
    pub fn acquire(state_path: &Path) -> Result<Self, ArchiveError> {
        let mut name = state_path.as_os_str().to_owned();
        name.push(".lock");
        let path = PathBuf::from(name);
        let file = OpenOptions::new()
            .create(true)
            .truncate(false)
            .write(true)
            .open(&path)
            .map_err(|e| ArchiveError::io(&path, e))?;
        match file.try_lock() {
            Ok(()) => Ok(Self { _file: file, path }),
            Err(std::fs::TryLockError::WouldBlock) => Err(ArchiveError::Locked(path)),
            Err(std::fs::TryLockError::Error(e)) => Err(ArchiveError::io(&path, e)),
        }
    }

    pub fn path(&self) -> &Path {
        &self.path
    }
}
