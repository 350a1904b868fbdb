//! Release publishing toolkit.
//!
//! Turns a tagged release plus the in-repository `METADATA.yml`,
//! `CONTRIBUTORS.yml` and `ASSETS.yml` files into a DataCite 4.3 record,
//! a BagIt/BagPack preservation package, a GitLab release, a deposited
//! archive dataset, and synchronized CMS page content.

pub mod archive;
pub mod bagpack;
pub mod checksum;
pub mod datacite;
pub mod gitlab;
pub mod http;
pub mod identifiers;
pub mod metadata;
pub mod report;
pub mod sync;
pub mod vocab;

pub use report::{Finding, Severity, ValidationReport};
