//! Runs the external `xmlschema` validator over rendered records.

use std::path::{Path, PathBuf};
use std::process::Command;

pub fn schema_path() -> PathBuf {
    match std::env::var_os("DATACITE_XSD") {
        Some(p) => PathBuf::from(p),
        None => super::fixtures().join("xsd/datacite-kernel-4.3.xsd"),
    }
}

/// Validates `files`; `Err` carries the validator's report. With
/// `optional_identifier` the DOI element may be absent.
pub fn validate(files: &[PathBuf], optional_identifier: bool) -> Result<String, String> {
    if files.is_empty() {
        return Ok("nothing to validate".into());
    }
    let script = super::fixtures().join("xsd/validate_xml.py");
    let mut cmd = Command::new("python3");
    cmd.arg(&script).arg(schema_path());
    if optional_identifier {
        cmd.arg("--optional-identifier");
    }
    cmd.args(files.iter().map(|p| p.as_path()));
    let out = cmd
        .output()
        .map_err(|e| format!("cannot run python3 {}: {e}", script.display()))?;
    let text = format!(
        "{}{}",
        String::from_utf8_lossy(&out.stdout),
        String::from_utf8_lossy(&out.stderr)
    );
    if out.status.success() {
        Ok(text)
    } else {
        Err(text)
    }
}

pub fn validate_one(file: &Path, optional_identifier: bool) -> Result<String, String> {
    validate(&[file.to_path_buf()], optional_identifier)
}
