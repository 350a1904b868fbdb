//! Deposit of a release into a research-data archive: create a draft,
//! attach metadata, upload assets, hand over to curator review, and watch
//! for the DOI the archive mints on publication.

mod adapter;
mod document;
mod state;

use std::fmt;
use std::path::{Path, PathBuf};
use std::time::{Duration, Instant};

use log::info;
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::http::{self, HttpClient, Secret, TransportError};
use crate::metadata::AssetSet;

pub use adapter::{ArchiveAdapter, ReferenceAdapter};
pub use document::{map_metadata, DOCUMENT_SCHEMA};
pub use state::{ReleaseState, StateFile, StateLock, STATE_FILE_NAME};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DatasetState {
    Draft,
    InReview,
    Published,
}

impl fmt::Display for DatasetState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            DatasetState::Draft => "draft",
            DatasetState::InReview => "in_review",
            DatasetState::Published => "published",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct UploadedFile {
    pub name: String,
    pub size: u64,
    /// Hex SHA-256 acknowledged by the archive.
    #[serde(rename = "sha256")]
    pub digest: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ArchiveDataset {
    pub dataset_id: String,
    pub state: DatasetState,
    pub doi: Option<String>,
    pub metadata_payload: Option<Value>,
    pub uploaded_files: Vec<UploadedFile>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum AdapterKind {
    /// The bundled reference JSON protocol.
    #[default]
    GenericRadarLike,
    /// A caller-provided [`ArchiveAdapter`].
    Extensible,
}

#[derive(Debug, Clone)]
pub struct ArchiveTarget {
    pub base_url: String,
    pub token: Secret,
    pub adapter: AdapterKind,
}

impl ArchiveTarget {
    pub fn new(base_url: impl Into<String>, token: Secret, adapter: AdapterKind) -> Result<Self, ArchiveError> {
        let mut base_url: String = base_url.into();
        http::check_base_url(&base_url).map_err(ArchiveError::Config)?;
        while base_url.ends_with('/') {
            base_url.pop();
        }
        if token.is_empty() {
            return Err(ArchiveError::Auth("no archive token configured".into()));
        }
        Ok(Self {
            base_url,
            token,
            adapter,
        })
    }
}

/// Builds the adapter for `target`. Extensible targets need a custom
/// adapter and cannot be built here.
pub fn connect(client: HttpClient, target: ArchiveTarget) -> Result<Box<dyn ArchiveAdapter>, ArchiveError> {
    match target.adapter {
        AdapterKind::GenericRadarLike => Ok(Box::new(ReferenceAdapter::new(client, target))),
        AdapterKind::Extensible => Err(ArchiveError::Config(
            "the extensible adapter kind needs a caller-provided ArchiveAdapter".into(),
        )),
    }
}

#[derive(Debug, Error)]
pub enum ArchiveError {
    #[error("invalid archive configuration: {0}")]
    Config(String),
    #[error("archive rejected the credentials: {0}")]
    Auth(String),
    #[error("archive rejected the metadata: {0}")]
    ValidationRejected(String),
    #[error("digest mismatch for {file}: local {local}, archive acknowledged {remote}")]
    DigestMismatch { file: String, local: String, remote: String },
    #[error("cannot {operation} dataset {dataset_id}: {message}")]
    State {
        dataset_id: String,
        operation: String,
        message: String,
    },
    #[error("precondition failed: {0}")]
    Precondition(String),
    #[error("dataset {0} not found (HTTP 404)")]
    NotFound(String),
    #[error("unexpected HTTP {status}: {body}")]
    Unexpected { status: u16, body: String },
    #[error("another deposit holds {0}")]
    Locked(PathBuf),
    #[error("malformed state file {path}: {message}")]
    StateFile { path: PathBuf, message: String },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Transport(#[from] TransportError),
}

impl ArchiveError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        ArchiveError::Io {
            path: path.to_path_buf(),
            source,
        }
    }

    /// True for errors caused by the dataset's lifecycle state.
    pub fn is_state_conflict(&self) -> bool {
        matches!(self, ArchiveError::State { .. } | ArchiveError::Locked(_))
    }
}

fn state_error(dataset: &ArchiveDataset, operation: &str) -> ArchiveError {
    ArchiveError::State {
        dataset_id: dataset.dataset_id.clone(),
        operation: operation.to_string(),
        message: format!("dataset is {}, expected draft", dataset.state),
    }
}

/// Creates a draft dataset and attaches `doc`.
///
/// Not idempotent: every call creates a new draft. Use [`deposit`] to
/// resume by release tag.
pub fn create_dataset(adapter: &dyn ArchiveAdapter, doc: &Value) -> Result<ArchiveDataset, ArchiveError> {
    let draft = adapter.create()?;
    info!("dataset {}: created", draft.dataset_id);
    adapter.attach_metadata(&draft.dataset_id, doc)
}

/// Uploads every asset not already held with the same digest, checking
/// each acknowledged digest against the local one.
pub fn upload_assets(
    adapter: &dyn ArchiveAdapter,
    dataset_id: &str,
    assets: &AssetSet,
) -> Result<ArchiveDataset, ArchiveError> {
    let current = adapter.status(dataset_id)?;
    if current.state != DatasetState::Draft {
        return Err(state_error(&current, "upload to"));
    }
    for asset in assets {
        let name = asset.file_name();
        let present = current
            .uploaded_files
            .iter()
            .any(|f| f.name == name && f.digest == asset.sha256 && f.size == asset.size);
        if present {
            info!("dataset {dataset_id}: {name} already uploaded");
            continue;
        }
        let receipt = adapter.upload(dataset_id, &asset.path, &name, &asset.media_type)?;
        if !receipt.digest.eq_ignore_ascii_case(&asset.sha256) {
            return Err(ArchiveError::DigestMismatch {
                file: name,
                local: asset.sha256.clone(),
                remote: receipt.digest,
            });
        }
        info!("dataset {dataset_id}: uploaded {name}");
    }
    let after = adapter.status(dataset_id)?;
    let missing: Vec<String> = assets
        .iter()
        .map(|a| a.file_name())
        .filter(|n| !after.uploaded_files.iter().any(|f| &f.name == n))
        .collect();
    if !missing.is_empty() {
        return Err(ArchiveError::Precondition(format!(
            "archive does not list uploaded files: {}",
            missing.join(", ")
        )));
    }
    Ok(after)
}

/// Moves a complete draft to curator review. Publication stays with the
/// curator.
pub fn submit_for_review(adapter: &dyn ArchiveAdapter, dataset_id: &str) -> Result<ArchiveDataset, ArchiveError> {
    let current = adapter.status(dataset_id)?;
    if current.state != DatasetState::Draft {
        return Err(state_error(&current, "submit"));
    }
    if current.uploaded_files.is_empty() {
        return Err(ArchiveError::Precondition(format!("dataset {dataset_id} has no files")));
    }
    if current.metadata_payload.is_none() {
        return Err(ArchiveError::Precondition(format!("dataset {dataset_id} has no metadata")));
    }
    let submitted = adapter.submit(dataset_id)?;
    info!("dataset {dataset_id}: submitted for review");
    Ok(submitted)
}

/// Polls until the dataset is published and returns its DOI, or `None`
/// once `timeout` has passed.
pub fn poll_doi(
    adapter: &dyn ArchiveAdapter,
    dataset_id: &str,
    timeout: Duration,
    interval: Duration,
) -> Result<Option<String>, ArchiveError> {
    let start = Instant::now();
    loop {
        let dataset = adapter.status(dataset_id)?;
        if dataset.state == DatasetState::Published {
            if let Some(doi) = dataset.doi {
                return Ok(Some(doi));
            }
        }
        if start.elapsed() + interval > timeout {
            return Ok(None);
        }
        std::thread::sleep(interval);
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum DepositOutcome {
    /// A new dataset was created and submitted.
    Submitted,
    /// An existing draft was completed and submitted.
    Resumed,
    /// The dataset for this tag was already in review or published.
    AlreadySubmitted,
}

#[derive(Debug, Clone)]
pub struct DepositReport {
    pub dataset: ArchiveDataset,
    pub outcome: DepositOutcome,
}

/// A dataset ready for uploads, with the state file lock held.
#[derive(Debug)]
pub struct PreparedDeposit {
    pub dataset: ArchiveDataset,
    pub outcome: DepositOutcome,
    _lock: StateLock,
}

impl PreparedDeposit {
    /// False when the dataset already left the draft state.
    pub fn needs_upload(&self) -> bool {
        self.outcome != DepositOutcome::AlreadySubmitted
    }
}

/// Finds the dataset recorded for `tag` or creates one, and makes sure
/// a draft carries `doc`.
///
/// The dataset id is written to the state file right after creation, so a
/// failed run resumes the same draft.
pub fn prepare_deposit(
    adapter: &dyn ArchiveAdapter,
    state_path: &Path,
    tag: &str,
    doc: &Value,
) -> Result<PreparedDeposit, ArchiveError> {
    let lock = StateLock::acquire(state_path)?;
    let mut state = StateFile::load(state_path)?;

    let (dataset, outcome) = match state.dataset_for(tag) {
        Some(id) => {
            let existing = adapter.status(id)?;
            if existing.state != DatasetState::Draft {
                info!("dataset {id}: already {}", existing.state);
                (existing, DepositOutcome::AlreadySubmitted)
            } else if existing.metadata_payload.as_ref() != Some(doc) {
                (adapter.attach_metadata(id, doc)?, DepositOutcome::Resumed)
            } else {
                (existing, DepositOutcome::Resumed)
            }
        }
        None => {
            let draft = adapter.create()?;
            info!("dataset {}: created", draft.dataset_id);
            state.record(tag, &draft.dataset_id);
            state.save(state_path)?;
            let attached = adapter.attach_metadata(&draft.dataset_id, doc)?;
            (attached, DepositOutcome::Submitted)
        }
    };
    Ok(PreparedDeposit {
        dataset,
        outcome,
        _lock: lock,
    })
}

/// Create or resume the dataset for `tag`, upload `assets`, and submit.
pub fn deposit(
    adapter: &dyn ArchiveAdapter,
    state_path: &Path,
    tag: &str,
    doc: &Value,
    assets: &AssetSet,
) -> Result<DepositReport, ArchiveError> {
    let prepared = prepare_deposit(adapter, state_path, tag, doc)?;
    if !prepared.needs_upload() {
        return Ok(DepositReport {
            dataset: prepared.dataset,
            outcome: prepared.outcome,
        });
    }
    let id = prepared.dataset.dataset_id.clone();
    upload_assets(adapter, &id, assets)?;
    let dataset = submit_for_review(adapter, &id)?;
    Ok(DepositReport {
        dataset,
        outcome: prepared.outcome,
    })
}
