#![allow(dead_code)]

pub mod bags;
pub mod criteria;
pub mod gen;
pub mod lifecycle;
pub mod sites;
pub mod xml;
pub mod xsd;

use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use relpub_core::metadata::{load_contributors, load_project_metadata, ContributorsFile, ProjectMetadata, ReleaseContext};

pub fn fixtures() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures")
}

pub fn release_fixture() -> PathBuf {
    fixtures().join("release")
}

pub fn listing_inputs() -> (ProjectMetadata, ContributorsFile) {
    let dir = release_fixture();
    let meta = load_project_metadata(&dir.join("METADATA.yml")).expect("fixture metadata loads");
    let contribs = load_contributors(&dir.join("CONTRIBUTORS.yml")).expect("fixture contributors load");
    (meta.value, contribs.value)
}

/// The fixture release: tag v5.0, created 2021-07-01, issued 2021-07-05.
pub fn v50() -> ReleaseContext {
    ReleaseContext::new(
        "v5.0",
        NaiveDate::from_ymd_opt(2021, 7, 1).unwrap(),
        NaiveDate::from_ymd_opt(2021, 7, 5).unwrap(),
    )
    .unwrap()
}

/// ISO 7064 MOD 11-2, written out independently of the library.
pub fn orcid_with_check_digit(base: &str) -> String {
    assert_eq!(base.len(), 15);
    let mut total = 0u32;
    for c in base.chars() {
        total = (total + c.to_digit(10).unwrap()) * 2;
    }
    let check = (12 - total % 11) % 11;
    let check = if check == 10 { 'X' } else { char::from_digit(check, 10).unwrap() };
    let full = format!("{base}{check}");
    format!("{}-{}-{}-{}", &full[0..4], &full[4..8], &full[8..12], &full[12..16])
}
