//! In-process mock servers for a GitLab instance and a RADAR-style
//! research-data archive.
//!
//! Each server runs on its own background runtime, binds an ephemeral
//! loopback port, keeps its state in memory and records every request it
//! sees. Tests can script failing statuses per route and inspect state
//! directly.

mod archive;
mod gitlab;
mod server;

pub use archive::{DatasetSnapshot, FileRecord, MockArchive, MockArchiveConfig};
pub use gitlab::{MockGitLab, MockGitLabConfig, PackageFile, StoredRelease};
pub use server::{RecordedRequest, PASS};
