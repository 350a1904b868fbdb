//! Content synchronization into CMS pages and publication lists from
//! BibTeX.
//!
//! A page opts in with two frontmatter keys:
//!
//! ```yaml
//! pipeline: openCARP
//! source: CONTRIBUTORS.yml
//! ```
//!
//! Syncing stores the source file's content under the page's `data` key.
//! YAML sources are stored as structured data, `.bib` sources as a rendered
//! publication list, anything else as text.

mod bibtex;
mod page;
mod publications;

use std::path::{Component, Path, PathBuf};

use serde_yaml::Value;
use thiserror::Error;
use walkdir::WalkDir;

pub use bibtex::{parse_bibtex, to_bibtex, BibEntry, BibError, Bibliography};
pub use page::{PageDocument, DATA_KEY};
pub use publications::{render_publications, split_authors, strip_protection, Publication};

#[derive(Debug, Error)]
pub enum SyncError {
    #[error("{}{}: {message}", path.display(), line.map(|l| format!(":{l}")).unwrap_or_default())]
    Parse {
        path: PathBuf,
        line: Option<usize>,
        message: String,
    },
    #[error("{page}: source `{source_path}` not found under {repo_root}")]
    MissingSource {
        page: PathBuf,
        source_path: String,
        repo_root: PathBuf,
    },
    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl SyncError {
    pub(crate) fn io(path: &Path, source: std::io::Error) -> Self {
        SyncError::Io {
            path: path.to_path_buf(),
            source,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SyncRule {
    pub pipeline: String,
    /// Path relative to the source repository root.
    pub source: String,
}

#[derive(Debug, Default)]
pub struct ScanResult {
    pub pages: Vec<(PageDocument, SyncRule)>,
    /// Malformed pages; they do not stop the scan.
    pub errors: Vec<SyncError>,
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::String(s) => Some(s.clone()),
        Value::Number(n) => Some(n.to_string()),
        Value::Bool(b) => Some(b.to_string()),
        _ => None,
    }
}

/// Finds every `*.md` page under `site_root` tagged with `pipeline`.
pub fn scan_pages(site_root: &Path, pipeline: &str) -> Result<ScanResult, SyncError> {
    if !site_root.is_dir() {
        return Err(SyncError::io(
            site_root,
            std::io::Error::new(std::io::ErrorKind::NotFound, "site root is not a directory"),
        ));
    }
    let mut result = ScanResult::default();
    let walker = WalkDir::new(site_root).sort_by_file_name().into_iter();
    for entry in walker {
        let entry = match entry {
            Ok(e) => e,
            Err(e) => {
                let path = e.path().map(Path::to_path_buf).unwrap_or_else(|| site_root.to_path_buf());
                result.errors.push(SyncError::io(&path, e.into()));
                continue;
            }
        };
        let path = entry.path();
        if !entry.file_type().is_file() || path.extension().and_then(|e| e.to_str()) != Some("md") {
            continue;
        }
        let page = match PageDocument::read(path) {
            Ok(Some(page)) => page,
            Ok(None) => continue,
            Err(e) => {
                result.errors.push(e);
                continue;
            }
        };
        let tagged = page
            .get("pipeline")
            .and_then(scalar_text)
            .is_some_and(|p| p == pipeline);
        if !tagged {
            continue;
        }
        match page.get("source").and_then(scalar_text).filter(|s| !s.trim().is_empty()) {
            Some(source) => {
                let rule = SyncRule {
                    pipeline: pipeline.to_string(),
                    source,
                };
                result.pages.push((page, rule));
            }
            None => result.errors.push(SyncError::Parse {
                path: path.to_path_buf(),
                line: None,
                message: format!("page has `pipeline: {pipeline}` but no `source`"),
            }),
        }
    }
    Ok(result)
}

fn resolve_source(page: &PageDocument, rule: &SyncRule, repo_root: &Path) -> Result<PathBuf, SyncError> {
    let relative = Path::new(&rule.source);
    let escapes = relative
        .components()
        .any(|c| !matches!(c, Component::Normal(_) | Component::CurDir));
    if escapes {
        return Err(SyncError::Parse {
            path: page.path.clone(),
            line: None,
            message: format!("source `{}` must be a relative path inside the repository", rule.source),
        });
    }
    let full = repo_root.join(relative);
    if !full.is_file() {
        return Err(SyncError::MissingSource {
            page: page.path.clone(),
            source_path: rule.source.clone(),
            repo_root: repo_root.to_path_buf(),
        });
    }
    Ok(full)
}

/// Loads the content a rule points at, as it will be stored under `data`.
pub fn source_data(path: &Path) -> Result<Value, SyncError> {
    let text = std::fs::read_to_string(path).map_err(|e| SyncError::io(path, e))?;
    let ext = path
        .extension()
        .and_then(|e| e.to_str())
        .map(str::to_ascii_lowercase);
    match ext.as_deref() {
        Some("yml" | "yaml") => serde_yaml::from_str(&text).map_err(|e| SyncError::Parse {
            path: path.to_path_buf(),
            line: e.location().map(|l| l.line()),
            message: e.to_string(),
        }),
        Some("bib") => {
            let bib = parse_bibtex(&text).map_err(|e| SyncError::Parse {
                path: path.to_path_buf(),
                line: Some(e.line),
                message: e.message,
            })?;
            for warning in &bib.warnings {
                log::warn!("{}: {warning}", path.display());
            }
            serde_yaml::to_value(render_publications(&bib.entries)).map_err(|e| SyncError::Parse {
                path: path.to_path_buf(),
                line: None,
                message: e.to_string(),
            })
        }
        _ => Ok(Value::String(text)),
    }
}

/// Returns `page` with its `data` entry replaced by the rule's source.
pub fn sync_page(page: &PageDocument, rule: &SyncRule, repo_root: &Path) -> Result<PageDocument, SyncError> {
    let source = resolve_source(page, rule, repo_root)?;
    page.with_data(source_data(&source)?)
}

#[derive(Debug, Default)]
pub struct SyncSummary {
    pub updated: Vec<PathBuf>,
    pub unchanged: Vec<PathBuf>,
    pub errors: Vec<SyncError>,
}

impl SyncSummary {
    pub fn is_clean(&self) -> bool {
        self.errors.is_empty()
    }
}

/// Syncs every tagged page under `site_root`, writing only pages whose
/// bytes change.
pub fn sync_site(site_root: &Path, pipeline: &str, repo_root: &Path, dry_run: bool) -> Result<SyncSummary, SyncError> {
    let scan = scan_pages(site_root, pipeline)?;
    let mut summary = SyncSummary {
        errors: scan.errors,
        ..SyncSummary::default()
    };
    for (page, rule) in scan.pages {
        let synced = match sync_page(&page, &rule, repo_root) {
            Ok(p) => p,
            Err(e) => {
                summary.errors.push(e);
                continue;
            }
        };
        let changed = synced.render() != page.render();
        if changed && !dry_run {
            if let Err(e) = synced.write_if_changed() {
                summary.errors.push(e);
                continue;
            }
        }
        if changed {
            summary.updated.push(page.path.clone());
        } else {
            summary.unchanged.push(page.path.clone());
        }
    }
    Ok(summary)
}
