use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

pub fn site_fixture() -> PathBuf {
    super::fixtures().join("site")
}

pub fn site_repo_fixture() -> PathBuf {
    super::fixtures().join("site-repo")
}

/// Copies the site fixture into a fresh temporary directory.
pub fn site_copy() -> tempfile::TempDir {
    let dir = tempfile::tempdir().unwrap();
    copy_tree(&site_fixture(), dir.path());
    dir
}

pub fn copy_tree(from: &Path, to: &Path) {
    for entry in walkdir::WalkDir::new(from) {
        let entry = entry.unwrap();
        let target = to.join(entry.path().strip_prefix(from).unwrap());
        if entry.file_type().is_dir() {
            std::fs::create_dir_all(&target).unwrap();
        } else {
            std::fs::copy(entry.path(), &target).unwrap();
        }
    }
}

/// SHA-256 of every file under `root`, keyed by relative path.
pub fn tree_digest(root: &Path) -> BTreeMap<PathBuf, String> {
    walkdir::WalkDir::new(root)
        .into_iter()
        .map(Result::unwrap)
        .filter(|e| e.file_type().is_file())
        .map(|e| {
            let rel = e.path().strip_prefix(root).unwrap().to_path_buf();
            (rel, hex::encode(Sha256::digest(std::fs::read(e.path()).unwrap())))
        })
        .collect()
}

/// Relative paths whose content differs between two digests.
pub fn changed(before: &BTreeMap<PathBuf, String>, after: &BTreeMap<PathBuf, String>) -> Vec<PathBuf> {
    let mut keys: Vec<&PathBuf> = before.keys().chain(after.keys()).collect();
    keys.sort();
    keys.dedup();
    keys.into_iter()
        .filter(|k| before.get(*k) != after.get(*k))
        .cloned()
        .collect()
}

/// Body of a page: everything after the closing frontmatter line, or the
/// whole text when the page has none. Written independently of the library.
pub fn page_body(text: &str) -> &str {
    let mut lines = text.split_inclusive('\n');
    match lines.next() {
        Some(first) if first.trim_end() == "---" => {}
        _ => return text,
    }
    let mut offset = text.find('\n').unwrap() + 1;
    for line in lines {
        offset += line.len();
        if line.trim_end() == "---" {
            return &text[offset..];
        }
    }
    panic!("unterminated frontmatter");
}

/// The YAML mapping between the delimiters, parsed.
pub fn page_frontmatter(text: &str) -> serde_yaml::Mapping {
    let body = page_body(text);
    let head = &text[..text.len() - body.len()];
    let inner = head.trim_start_matches("---\n");
    let inner = &inner[..inner.rfind("---").unwrap()];
    serde_yaml::from_str(inner).unwrap()
}
