//! The in-repository metadata files that drive every release job:
//! `METADATA.yml`, `CONTRIBUTORS.yml` and `ASSETS.yml`.

mod assets;
mod contributors;
mod project;
mod release;
mod validate;
pub(crate) mod yaml;

use std::path::PathBuf;

use thiserror::Error;

use crate::identifiers::IdentifierError;
use crate::report::ValidationReport;

pub use assets::{resolve_assets, Asset, AssetRole, AssetSet};
pub use contributors::{load_contributors, Affiliation, Contributor, ContributorsFile, PersonEntry};
pub use project::{
    load_project_metadata, AdditionalTitle, AlternateIdentifier, Description, FundingReference,
    ProjectMetadata, RelatedIdentifier, SubjectEntry,
};
pub use release::ReleaseContext;
pub use validate::validate_metadata;

#[derive(Debug, Error)]
pub enum MetadataError {
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{path}:{line}: malformed YAML: {message}")]
    Parse {
        path: PathBuf,
        line: usize,
        message: String,
    },
    #[error("{path}: `{field}`: {message}")]
    Schema {
        path: PathBuf,
        field: String,
        message: String,
    },
    #[error("{path}: `{field}`: {source}")]
    Identifier {
        path: PathBuf,
        field: String,
        #[source]
        source: IdentifierError,
    },
    #[error("missing assets: {}", .0.join(", "))]
    MissingAsset(Vec<String>),
    #[error("asset role `{0}` appears more than once")]
    DuplicateRole(String),
    #[error("invalid release context: {0}")]
    Release(String),
}

impl MetadataError {
    pub(crate) fn schema(path: &std::path::Path, field: &str, message: impl Into<String>) -> Self {
        MetadataError::Schema {
            path: path.to_path_buf(),
            field: field.to_string(),
            message: message.into(),
        }
    }
}

/// A loaded document together with non-fatal findings raised while loading it.
#[derive(Debug, Clone)]
pub struct Loaded<T> {
    pub value: T,
    pub warnings: ValidationReport,
}
