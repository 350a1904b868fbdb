use std::fmt;

use relpub_core::archive::ArchiveError;
use relpub_core::bagpack::BagError;
use relpub_core::datacite::DataCiteError;
use relpub_core::gitlab::GitLabError;
use relpub_core::metadata::MetadataError;
use relpub_core::sync::SyncError;

/// Process exit codes, shared by every subcommand.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exit {
    Success = 0,
    Findings = 1,
    Io = 2,
    Remote = 3,
    Conflict = 4,
}

impl Exit {
    pub fn code(self) -> u8 {
        self as u8
    }

    pub fn kind(self) -> &'static str {
        match self {
            Exit::Success => "success",
            Exit::Findings => "findings",
            Exit::Io => "io",
            Exit::Remote => "remote",
            Exit::Conflict => "conflict",
        }
    }
}

#[derive(Debug)]
pub struct CliError {
    pub exit: Exit,
    pub message: String,
}

impl CliError {
    pub fn new(exit: Exit, message: impl Into<String>) -> Self {
        Self {
            exit,
            message: message.into(),
        }
    }

    pub fn io(message: impl Into<String>) -> Self {
        Self::new(Exit::Io, message)
    }

    pub fn config(message: impl Into<String>) -> Self {
        Self::new(Exit::Io, message)
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.message)
    }
}

impl From<MetadataError> for CliError {
    fn from(e: MetadataError) -> Self {
        let exit = match e {
            MetadataError::Io { .. } | MetadataError::MissingAsset(_) => Exit::Io,
            _ => Exit::Findings,
        };
        Self::new(exit, e.to_string())
    }
}

impl From<DataCiteError> for CliError {
    fn from(e: DataCiteError) -> Self {
        Self::new(Exit::Findings, e.to_string())
    }
}

impl From<BagError> for CliError {
    fn from(e: BagError) -> Self {
        let exit = match e {
            BagError::ValidationFailed(_) | BagError::InvalidInfo(_) | BagError::DuplicatePayloadName(_) => {
                Exit::Findings
            }
            _ => Exit::Io,
        };
        Self::new(exit, e.to_string())
    }
}

impl From<GitLabError> for CliError {
    fn from(e: GitLabError) -> Self {
        let exit = match e {
            GitLabError::Conflict(_) => Exit::Conflict,
            GitLabError::Config(_) | GitLabError::Io { .. } => Exit::Io,
            _ => Exit::Remote,
        };
        Self::new(exit, e.to_string())
    }
}

impl From<ArchiveError> for CliError {
    fn from(e: ArchiveError) -> Self {
        let exit = match e {
            ArchiveError::State { .. } | ArchiveError::Locked(_) => Exit::Conflict,
            ArchiveError::Config(_) | ArchiveError::Io { .. } | ArchiveError::StateFile { .. } => Exit::Io,
            ArchiveError::Precondition(_) => Exit::Findings,
            _ => Exit::Remote,
        };
        Self::new(exit, e.to_string())
    }
}

impl From<SyncError> for CliError {
    fn from(e: SyncError) -> Self {
        let exit = match e {
            SyncError::Parse { .. } => Exit::Findings,
            _ => Exit::Io,
        };
        Self::new(exit, e.to_string())
    }
}
