use std::io::Write;
use std::path::{Path, PathBuf};

use serde_yaml::{Mapping, Value};

use super::SyncError;

pub const DATA_KEY: &str = "data";

/// A CMS page split into YAML frontmatter and body.
///
/// The original frontmatter text is kept so that only the `data` block
/// changes when the page is re-rendered.
#[derive(Debug, Clone, PartialEq)]
pub struct PageDocument {
    pub path: PathBuf,
    pub frontmatter: Mapping,
    pub body: String,
    open: String,
    raw: String,
    close: String,
}

fn delimiter_line(line: &str) -> bool {
    line.trim_end_matches(['\r', '\n']).trim_end() == "---"
}

/// Splits `text` into (opening line, frontmatter, closing line, body).
/// Returns `None` when the text does not start with a `---` line.
fn split(text: &str) -> Option<Result<(&str, &str, &str, &str), usize>> {
    let first_end = text.find('\n').map_or(text.len(), |i| i + 1);
    if !delimiter_line(&text[..first_end]) {
        return None;
    }
    let mut offset = first_end;
    let mut line_no = 1;
    while offset < text.len() {
        line_no += 1;
        let end = text[offset..].find('\n').map_or(text.len(), |i| offset + i + 1);
        if delimiter_line(&text[offset..end]) {
            return Some(Ok((
                &text[..first_end],
                &text[first_end..offset],
                &text[offset..end],
                &text[end..],
            )));
        }
        offset = end;
    }
    Some(Err(line_no))
}

fn parse_mapping(path: &Path, raw: &str) -> Result<Mapping, SyncError> {
    if raw.trim().is_empty() {
        return Ok(Mapping::new());
    }
    match serde_yaml::from_str::<Value>(raw) {
        Ok(Value::Mapping(m)) => Ok(m),
        Ok(Value::Null) => Ok(Mapping::new()),
        Ok(_) => Err(SyncError::Parse {
            path: path.to_path_buf(),
            line: Some(2),
            message: "frontmatter is not a mapping".into(),
        }),
        Err(e) => Err(SyncError::Parse {
            path: path.to_path_buf(),
            line: e.location().map(|l| l.line() + 1),
            message: e.to_string(),
        }),
    }
}

impl PageDocument {
    /// Parses page text. `Ok(None)` means the page has no frontmatter.
    pub fn parse(path: &Path, text: &str) -> Result<Option<Self>, SyncError> {
        let (open, raw, close, body) = match split(text) {
            None => return Ok(None),
            Some(Err(line)) => {
                return Err(SyncError::Parse {
                    path: path.to_path_buf(),
                    line: Some(line),
                    message: "frontmatter is never closed by a `---` line".into(),
                })
            }
            Some(Ok(parts)) => parts,
        };
        let frontmatter = parse_mapping(path, raw)?;
        Ok(Some(Self {
            path: path.to_path_buf(),
            frontmatter,
            body: body.to_string(),
            open: open.to_string(),
            raw: raw.to_string(),
            close: close.to_string(),
        }))
    }

    pub fn read(path: &Path) -> Result<Option<Self>, SyncError> {
        let text = std::fs::read_to_string(path).map_err(|e| SyncError::io(path, e))?;
        Self::parse(path, &text)
    }

    pub fn get(&self, key: &str) -> Option<&Value> {
        self.frontmatter.get(key)
    }

    pub fn render(&self) -> String {
        format!("{}{}{}{}", self.open, self.raw, self.close, self.body)
    }

    /// Replaces the top-level `data` entry, leaving every other
    /// frontmatter line untouched.
    pub fn with_data(&self, data: Value) -> Result<Self, SyncError> {
        let newline = if self.open.ends_with("\r\n") { "\r\n" } else { "\n" };
        let mut block_map = Mapping::new();
        block_map.insert(Value::String(DATA_KEY.into()), data.clone());
        let mut block = serde_yaml::to_string(&block_map).map_err(|e| SyncError::Parse {
            path: self.path.clone(),
            line: None,
            message: format!("cannot serialize data: {e}"),
        })?;
        if newline == "\r\n" {
            block = block.replace('\n', "\r\n");
        }

        let raw = splice_block(&self.raw, &block, newline);
        let frontmatter = parse_mapping(&self.path, &raw)?;

        let mut expected = self.frontmatter.clone();
        expected.insert(Value::String(DATA_KEY.into()), data);
        if frontmatter != expected {
            return Err(SyncError::Parse {
                path: self.path.clone(),
                line: None,
                message: "the `data` entry is not a plain top-level block and cannot be replaced safely".into(),
            });
        }
        Ok(Self {
            frontmatter,
            raw,
            ..self.clone()
        })
    }

    /// Writes the page through a temporary file. Returns false, without
    /// touching the file, when its bytes would not change.
    pub fn write_if_changed(&self) -> Result<bool, SyncError> {
        let rendered = self.render();
        if std::fs::read(&self.path).ok().as_deref() == Some(rendered.as_bytes()) {
            return Ok(false);
        }
        let dir = self.path.parent().unwrap_or(Path::new("."));
        let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(|e| SyncError::io(dir, e))?;
        tmp.write_all(rendered.as_bytes())
            .map_err(|e| SyncError::io(&self.path, e))?;
        if let Ok(meta) = std::fs::metadata(&self.path) {
            let _ = tmp.as_file().set_permissions(meta.permissions());
        }
        tmp.persist(&self.path)
            .map_err(|e| SyncError::io(&self.path, e.error))?;
        Ok(true)
    }
}

fn is_block_continuation(line: &str) -> bool {
    line.starts_with(' ') || line.starts_with('\t') || line == "-" || line.starts_with("- ") || line.starts_with("-\r")
}

fn is_blank(line: &str) -> bool {
    line.trim().is_empty()
}

/// Replaces the `data:` block in `raw` with `block`, or appends it.
fn splice_block(raw: &str, block: &str, newline: &str) -> String {
    let lines: Vec<&str> = raw.split_inclusive('\n').collect();
    let start = lines.iter().position(|l| {
        let t = l.trim_end_matches(['\r', '\n']);
        t.strip_prefix(DATA_KEY)
            .is_some_and(|rest| rest.trim_start().starts_with(':') && !rest.starts_with(char::is_alphanumeric))
            && !l.starts_with(char::is_whitespace)
    });
    match start {
        Some(start) => {
            let mut end = start + 1;
            let mut last_content = start + 1;
            while end < lines.len() {
                let line = lines[end];
                if is_blank(line) {
                    end += 1;
                    continue;
                }
                if !is_block_continuation(line) {
                    break;
                }
                end += 1;
                last_content = end;
            }
            let mut out: String = lines[..start].concat();
            out.push_str(block);
            out.push_str(&lines[last_content..].concat());
            out
        }
        None => {
            let mut out = raw.to_string();
            if !out.is_empty() && !out.ends_with('\n') {
                out.push_str(newline);
            }
            out.push_str(block);
            out
        }
    }
}
