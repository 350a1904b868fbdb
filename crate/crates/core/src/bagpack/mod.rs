//! BagIt 1.0 bags extended to BagPack: payload under `data/`, checksum
//! manifests, `bag-info.txt`, and a `metadata/` tag directory that carries
//! the DataCite record.

mod build;
mod info;
mod manifest;
mod serialize;
mod validate;

use std::path::PathBuf;

use thiserror::Error;

use crate::checksum::Algorithm;
use crate::report::Finding;

pub use build::{build_bag, compute_payload_oxum};
pub use info::BagInfo;
pub use manifest::{decode_path, encode_path};
pub use serialize::serialize_bag;
pub use validate::{validate_bag, validate_bag_with, BagProfile};

pub const BAGIT_TXT: &str = "BagIt-Version: 1.0\nTag-File-Character-Encoding: UTF-8\n";
pub const PAYLOAD_DIR: &str = "data";
pub const METADATA_DIR: &str = "metadata";
pub const BAG_INFO: &str = "bag-info.txt";

#[derive(Debug, Error)]
pub enum BagError {
    #[error("destination {0} exists and is not empty")]
    DestinationNotEmpty(PathBuf),
    #[error("at least one checksum algorithm is required")]
    NoAlgorithms,
    #[error("two payload files would both be named `{0}`")]
    DuplicatePayloadName(String),
    #[error("invalid bag-info: {0}")]
    InvalidInfo(String),
    #[error("bag does not validate: {0}")]
    ValidationFailed(Finding),
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

pub(crate) fn io_err(path: impl Into<PathBuf>) -> impl FnOnce(std::io::Error) -> BagError {
    let path = path.into();
    move |source| BagError::Io { path, source }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PayloadEntry {
    /// Path relative to the bag root, `data/` prefixed, `/` separated.
    pub path: String,
    pub size: u64,
    pub digests: Vec<(Algorithm, String)>,
}

/// A bag as written by [`build_bag`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Bag {
    pub root: PathBuf,
    pub algorithms: Vec<Algorithm>,
    pub payload: Vec<PayloadEntry>,
    pub info: BagInfo,
}

impl Bag {
    pub fn payload_oxum(&self) -> String {
        let bytes: u64 = self.payload.iter().map(|p| p.size).sum();
        format!("{}.{}", bytes, self.payload.len())
    }
}
