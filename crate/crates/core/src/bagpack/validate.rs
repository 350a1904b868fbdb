use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::path::Path;

use chrono::NaiveDate;

use super::build::{compute_payload_oxum, files_under, tag_files};
use super::info::{BagInfo, PAYLOAD_OXUM, REQUIRED_LABELS};
use super::manifest::{self, ManifestLine};
use super::{BAG_INFO, METADATA_DIR, PAYLOAD_DIR};
use crate::checksum::{self, Algorithm};
use crate::datacite::DATACITE_FILE_NAME;
use crate::report::ValidationReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct BagProfile {
    /// Require `metadata/datacite.xml`, a tag manifest and the standard
    /// bag-info labels.
    pub bagpack: bool,
}

impl Default for BagProfile {
    fn default() -> Self {
        Self { bagpack: true }
    }
}

/// Validates a bag with the BagPack profile on.
pub fn validate_bag(root: &Path) -> ValidationReport {
    validate_bag_with(root, BagProfile::default())
}

/// Every problem is a finding; nothing here fails.
///
/// Digest problems are aggregated per file, so a corrupted payload file
/// yields one finding no matter how many manifests cover it.
pub fn validate_bag_with(root: &Path, profile: BagProfile) -> ValidationReport {
    let mut report = ValidationReport::new();
    if !root.is_dir() {
        report.error(root.display().to_string(), "bag root is not a directory");
        return report;
    }
    check_declaration(root, &mut report);

    let data = root.join(PAYLOAD_DIR);
    let payload_on_disk: BTreeSet<String> = if data.is_dir() {
        match files_under(&data) {
            Ok(files) => files
                .into_iter()
                .map(|(rel, _)| format!("{PAYLOAD_DIR}/{rel}"))
                .collect(),
            Err(e) => {
                report.error(PAYLOAD_DIR, e.to_string());
                BTreeSet::new()
            }
        }
    } else {
        report.error(PAYLOAD_DIR, "payload directory is missing");
        BTreeSet::new()
    };

    let manifests = find_manifests(root, "manifest-", &mut report);
    if manifests.is_empty() {
        report.error("manifest-*.txt", "no payload manifest");
    }
    check_manifests(root, &manifests, &payload_on_disk, true, &mut report);

    let tagmanifests = find_manifests(root, "tagmanifest-", &mut report);
    if tagmanifests.is_empty() && profile.bagpack {
        report.error("tagmanifest-*.txt", "no tag manifest");
    }
    let tags_on_disk: BTreeSet<String> = match tag_files(root) {
        Ok(files) => files.into_iter().map(|(rel, _)| rel).collect(),
        Err(e) => {
            report.error(".", e.to_string());
            BTreeSet::new()
        }
    };
    check_manifests(root, &tagmanifests, &tags_on_disk, false, &mut report);

    check_bag_info(root, &data, profile, &mut report);

    if profile.bagpack {
        let record = format!("{METADATA_DIR}/{DATACITE_FILE_NAME}");
        if !root.join(&record).is_file() {
            report.error(record, "BagPack requires a DataCite record");
        }
    }
    report
}

fn check_declaration(root: &Path, report: &mut ValidationReport) {
    let path = root.join("bagit.txt");
    let Ok(bytes) = fs::read(&path) else {
        report.error("bagit.txt", "bag declaration is missing");
        return;
    };
    let Ok(text) = String::from_utf8(bytes) else {
        report.error("bagit.txt", "bag declaration is not UTF-8");
        return;
    };
    let lines: Vec<&str> = text.lines().collect();
    let version_ok = lines
        .first()
        .and_then(|l| l.strip_prefix("BagIt-Version: "))
        .and_then(|v| v.split_once('.'))
        .is_some_and(|(major, minor)| {
            !major.is_empty()
                && !minor.is_empty()
                && major.bytes().all(|b| b.is_ascii_digit())
                && minor.bytes().all(|b| b.is_ascii_digit())
        });
    let encoding_ok = lines.get(1) == Some(&"Tag-File-Character-Encoding: UTF-8");
    if lines.len() != 2 || !version_ok || !encoding_ok || !text.ends_with('\n') {
        report.error("bagit.txt", "malformed bag declaration");
    }
}

fn find_manifests(root: &Path, prefix: &str, report: &mut ValidationReport) -> Vec<(Algorithm, String)> {
    let mut out = Vec::new();
    let Ok(entries) = fs::read_dir(root) else {
        return out;
    };
    let mut names: Vec<String> = entries
        .filter_map(Result::ok)
        .filter(|e| e.file_type().map(|t| t.is_file()).unwrap_or(false))
        .map(|e| e.file_name().to_string_lossy().into_owned())
        .filter(|n| n.starts_with(prefix) && n.ends_with(".txt"))
        .collect();
    names.sort();
    for name in names {
        let alg = &name[prefix.len()..name.len() - 4];
        match alg.parse::<Algorithm>() {
            Ok(a) => out.push((a, name)),
            Err(_) => report.warning(name.clone(), format!("algorithm `{alg}` is not verified")),
        }
    }
    out
}

#[derive(Default)]
struct FileState {
    mismatched: Vec<Algorithm>,
    missing_from: Vec<String>,
}

/// Checks a set of manifests (payload or tag) against the files on disk.
fn check_manifests(
    root: &Path,
    manifests: &[(Algorithm, String)],
    on_disk: &BTreeSet<String>,
    payload: bool,
    report: &mut ValidationReport,
) {
    let mut states: BTreeMap<String, FileState> = BTreeMap::new();
    let mut absent: BTreeSet<String> = BTreeSet::new();

    for (alg, name) in manifests {
        let text = match fs::read(root.join(name)).map(String::from_utf8) {
            Ok(Ok(text)) => text,
            Ok(Err(_)) => {
                report.error(name.clone(), "manifest is not UTF-8");
                continue;
            }
            Err(e) => {
                report.error(name.clone(), e.to_string());
                continue;
            }
        };
        let (lines, problems) = manifest::parse(&text, *alg);
        for (line, problem) in problems {
            report.error(format!("{name}:{line}"), problem);
        }
        let mut listed = BTreeSet::new();
        for ManifestLine {
            line,
            digest,
            path,
            noncanonical,
        } in lines
        {
            if let Some(why) = noncanonical {
                report.warning(format!("{name}:{line}"), why);
            }
            if !listed.insert(path.clone()) {
                report.error(format!("{name}:{line}"), format!("duplicate entry for `{path}`"));
                continue;
            }
            let under_data = path.starts_with(&format!("{PAYLOAD_DIR}/"));
            if path.split('/').any(|c| c == ".." || c == "." || c.is_empty()) || path.starts_with('/') {
                report.error(format!("{name}:{line}"), format!("unsafe path `{path}`"));
                continue;
            }
            if payload != under_data {
                let why = if payload {
                    "payload manifest entry outside data/"
                } else {
                    "tag manifest entry inside data/"
                };
                report.error(format!("{name}:{line}"), format!("{why}: `{path}`"));
                continue;
            }
            if !on_disk.contains(&path) {
                absent.insert(path);
                continue;
            }
            let file = root.join(&path);
            match checksum::digest_file(*alg, &file) {
                Ok(actual) if actual == digest => {}
                Ok(_) => states.entry(path).or_default().mismatched.push(*alg),
                Err(e) => report.error(path, e.to_string()),
            }
        }
        for path in on_disk {
            if !listed.contains(path) {
                states.entry(path.clone()).or_default().missing_from.push(name.clone());
            }
        }
    }

    for path in absent {
        let what = if payload { "payload" } else { "tag" };
        report.error(path, format!("listed in a manifest but {what} file is missing"));
    }
    for (path, state) in states {
        if !state.mismatched.is_empty() {
            let algs: Vec<&str> = state.mismatched.iter().map(|a| a.name()).collect();
            report.error(path.clone(), format!("digest mismatch ({})", algs.join(", ")));
        }
        if !state.missing_from.is_empty() {
            let what = if payload {
                "orphan payload file"
            } else {
                "tag file not covered"
            };
            report.error(path, format!("{what}: not in {}", state.missing_from.join(", ")));
        }
    }
}

fn check_bag_info(root: &Path, data: &Path, profile: BagProfile, report: &mut ValidationReport) {
    let path = root.join(BAG_INFO);
    let text = match fs::read(&path) {
        Ok(bytes) => match String::from_utf8(bytes) {
            Ok(t) => t,
            Err(_) => {
                report.error(BAG_INFO, "not UTF-8");
                return;
            }
        },
        Err(_) => {
            if profile.bagpack {
                report.error(BAG_INFO, "bag-info.txt is missing");
            }
            return;
        }
    };
    let info = match BagInfo::parse(&text) {
        Ok(info) => info,
        Err(e) => {
            report.error(BAG_INFO, e);
            return;
        }
    };
    if profile.bagpack {
        for label in REQUIRED_LABELS {
            if info.get(label).is_none() {
                report.error(BAG_INFO, format!("missing `{label}`"));
            }
        }
    }
    if let Some(date) = info.get(super::info::BAGGING_DATE) {
        if date.parse::<NaiveDate>().is_err() {
            report.error(BAG_INFO, format!("Bagging-Date `{date}` is not an ISO date"));
        }
    }
    let oxums: Vec<&str> = info.get_all(PAYLOAD_OXUM).collect();
    if oxums.len() > 1 {
        report.error(BAG_INFO, "Payload-Oxum appears more than once");
    }
    if let Some(declared) = oxums.first() {
        let well_formed = declared
            .split_once('.')
            .is_some_and(|(a, b)| {
                !a.is_empty() && !b.is_empty() && (a.to_owned() + b).bytes().all(|c| c.is_ascii_digit())
            });
        if !well_formed {
            report.error(BAG_INFO, format!("malformed Payload-Oxum `{declared}`"));
        } else if data.is_dir() {
            match compute_payload_oxum(data) {
                Ok(actual) if actual == *declared => {}
                Ok(actual) => report.error(
                    BAG_INFO,
                    format!("Payload-Oxum {declared} does not match payload {actual}"),
                ),
                Err(e) => report.error(PAYLOAD_DIR, e.to_string()),
            }
        }
    }
}
