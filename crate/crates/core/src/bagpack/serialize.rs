use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use walkdir::WalkDir;

use super::{io_err, validate_bag, BagError, BagInfo, BAG_INFO};

const FILE_MODE: u32 = 0o644;
const DIR_MODE: u32 = 0o755;

fn bagging_mtime(root: &Path) -> u64 {
    fs::read_to_string(root.join(BAG_INFO))
        .ok()
        .and_then(|t| BagInfo::parse(&t).ok())
        .and_then(|info| info.bagging_date())
        .and_then(|d| d.and_hms_opt(0, 0, 0))
        .map(|dt| dt.and_utc().timestamp().max(0) as u64)
        .unwrap_or(0)
}

fn header(kind: tar::EntryType, size: u64, mode: u32, mtime: u64) -> tar::Header {
    let mut header = tar::Header::new_gnu();
    header.set_entry_type(kind);
    header.set_size(size);
    header.set_mode(mode);
    header.set_uid(0);
    header.set_gid(0);
    header.set_mtime(mtime);
    header
}

/// Writes the bag at `root` as a tar archive at `out`.
///
/// Entries are sorted by path under a top-level directory named after the
/// bag, owned by 0/0, with fixed modes and the Bagging-Date as mtime, so
/// the same bag always produces the same bytes. Refuses bags that do not
/// validate.
pub fn serialize_bag(root: &Path, out: &Path) -> Result<PathBuf, BagError> {
    let report = validate_bag(root);
    if let Some(first) = report.findings.into_iter().next() {
        return Err(BagError::ValidationFailed(first));
    }
    let mtime = bagging_mtime(root);
    let top = root
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .unwrap_or_else(|| "bag".into());

    let mut entries = Vec::new();
    for entry in WalkDir::new(root).min_depth(1) {
        let entry = entry.map_err(|e| BagError::Io {
            path: root.to_path_buf(),
            source: e.into(),
        })?;
        let rel = entry
            .path()
            .strip_prefix(root)
            .expect("walkdir yields children of its root")
            .components()
            .map(|c| c.as_os_str().to_string_lossy().into_owned())
            .collect::<Vec<_>>()
            .join("/");
        entries.push((rel, entry.path().to_path_buf(), entry.file_type().is_dir()));
    }
    entries.sort_by(|a, b| a.0.cmp(&b.0));

    let tmp = out.with_extension("tar.partial");
    let file = File::create(&tmp).map_err(io_err(&tmp))?;
    let mut builder = tar::Builder::new(BufWriter::new(file));
    builder.mode(tar::HeaderMode::Deterministic);

    let mut dir_header = header(tar::EntryType::Directory, 0, DIR_MODE, mtime);
    builder
        .append_data(&mut dir_header, format!("{top}/"), std::io::empty())
        .map_err(io_err(&tmp))?;
    for (rel, path, is_dir) in entries {
        let name = format!("{top}/{rel}");
        if is_dir {
            let mut h = header(tar::EntryType::Directory, 0, DIR_MODE, mtime);
            builder
                .append_data(&mut h, format!("{name}/"), std::io::empty())
                .map_err(io_err(&tmp))?;
        } else {
            let size = fs::metadata(&path).map_err(io_err(&path))?.len();
            let mut h = header(tar::EntryType::Regular, size, FILE_MODE, mtime);
            let reader = File::open(&path).map_err(io_err(&path))?;
            builder.append_data(&mut h, name, reader).map_err(io_err(&path))?;
        }
    }
    let mut writer = builder.into_inner().map_err(io_err(&tmp))?;
    writer.flush().map_err(io_err(&tmp))?;
    drop(writer);
    fs::rename(&tmp, out).map_err(io_err(out))?;
    Ok(out.to_path_buf())
}
