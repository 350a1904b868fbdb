use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use walkdir::WalkDir;

use super::info::PAYLOAD_OXUM;
use super::manifest::{self, manifest_name, tagmanifest_name};
use super::{io_err, Bag, BagError, BagInfo, PayloadEntry, BAGIT_TXT, BAG_INFO, METADATA_DIR, PAYLOAD_DIR};
use crate::checksum::{self, Algorithm};
use crate::datacite::DATACITE_FILE_NAME;
use crate::metadata::AssetSet;

fn ensure_empty_dest(dest: &Path) -> Result<(), BagError> {
    match fs::read_dir(dest) {
        Ok(mut entries) => {
            if entries.next().is_some() {
                return Err(BagError::DestinationNotEmpty(dest.to_path_buf()));
            }
            Ok(())
        }
        Err(e) if e.kind() == std::io::ErrorKind::NotFound => {
            fs::create_dir_all(dest).map_err(io_err(dest))
        }
        Err(e) => Err(BagError::Io {
            path: dest.to_path_buf(),
            source: e,
        }),
    }
}

/// Relative `/`-separated paths of all regular files under `dir`, sorted.
pub(crate) fn files_under(dir: &Path) -> Result<Vec<(String, PathBuf)>, BagError> {
    let mut out = Vec::new();
    for entry in WalkDir::new(dir).sort_by_file_name() {
        let entry = entry.map_err(|e| {
            let path = e.path().map(Path::to_path_buf).unwrap_or_else(|| dir.to_path_buf());
            BagError::Io {
                path,
                source: e.into(),
            }
        })?;
        if !entry.file_type().is_file() {
            continue;
        }
        let rel = entry
            .path()
            .strip_prefix(dir)
            .expect("walkdir yields children of its root")
            .components()
            .map(|c| c.as_os_str().to_string_lossy().into_owned())
            .collect::<Vec<_>>()
            .join("/");
        out.push((rel, entry.path().to_path_buf()));
    }
    out.sort();
    Ok(out)
}

/// `<octet count>.<stream count>` over the regular files below `payload_root`.
pub fn compute_payload_oxum(payload_root: &Path) -> Result<String, BagError> {
    let mut bytes = 0u64;
    let mut count = 0u64;
    for (_, path) in files_under(payload_root)? {
        bytes += fs::metadata(&path).map_err(io_err(&path))?.len();
        count += 1;
    }
    Ok(format!("{bytes}.{count}"))
}

fn write_manifests(
    root: &Path,
    algorithms: &[Algorithm],
    files: &[(String, PathBuf)],
    name: fn(Algorithm) -> String,
) -> Result<Vec<Vec<(String, String)>>, BagError> {
    let mut all = Vec::with_capacity(algorithms.len());
    for &alg in algorithms {
        let mut entries = Vec::with_capacity(files.len());
        for (rel, path) in files {
            let digest = checksum::digest_file(alg, path).map_err(io_err(path))?;
            entries.push((rel.clone(), digest));
        }
        let target = root.join(name(alg));
        fs::write(&target, manifest::render(&mut entries)).map_err(io_err(&target))?;
        all.push(entries);
    }
    Ok(all)
}

/// Writes a BagPack at `dest`:
///
/// ```text
/// bagit.txt
/// bag-info.txt
/// data/<asset file names>
/// manifest-<alg>.txt
/// metadata/datacite.xml
/// tagmanifest-<alg>.txt
/// ```
///
/// Payload-Oxum is computed from what was actually written to `data/`.
pub fn build_bag(
    assets: &AssetSet,
    datacite_xml: &[u8],
    info: &BagInfo,
    algorithms: &[Algorithm],
    dest: &Path,
) -> Result<Bag, BagError> {
    let algorithms: Vec<Algorithm> = algorithms.iter().copied().collect::<BTreeSet<_>>().into_iter().collect();
    if algorithms.is_empty() {
        return Err(BagError::NoAlgorithms);
    }
    let problems = info.problems();
    if let Some(first) = problems.into_iter().next() {
        return Err(BagError::InvalidInfo(first));
    }
    let mut names = BTreeSet::new();
    for asset in assets {
        let name = asset.file_name();
        if name.is_empty() || !names.insert(name.clone()) {
            return Err(BagError::DuplicatePayloadName(name));
        }
    }

    ensure_empty_dest(dest)?;

    let bagit = dest.join("bagit.txt");
    fs::write(&bagit, BAGIT_TXT).map_err(io_err(&bagit))?;

    let data = dest.join(PAYLOAD_DIR);
    fs::create_dir_all(&data).map_err(io_err(&data))?;
    for asset in assets {
        let target = data.join(asset.file_name());
        fs::copy(&asset.path, &target).map_err(io_err(&asset.path))?;
    }

    let payload_files: Vec<(String, PathBuf)> = files_under(&data)?
        .into_iter()
        .map(|(rel, path)| (format!("{PAYLOAD_DIR}/{rel}"), path))
        .collect();
    let digests = write_manifests(dest, &algorithms, &payload_files, manifest_name)?;

    let mut payload = Vec::with_capacity(payload_files.len());
    for (i, (rel, path)) in payload_files.iter().enumerate() {
        let size = fs::metadata(path).map_err(io_err(path))?.len();
        let digests = algorithms
            .iter()
            .zip(&digests)
            .map(|(alg, entries)| (*alg, entries[i].1.clone()))
            .collect();
        payload.push(PayloadEntry {
            path: rel.clone(),
            size,
            digests,
        });
    }

    let mut info = info.clone();
    info.set(PAYLOAD_OXUM, compute_payload_oxum(&data)?);
    let bag_info = dest.join(BAG_INFO);
    fs::write(&bag_info, info.to_text()).map_err(io_err(&bag_info))?;

    let metadata = dest.join(METADATA_DIR);
    fs::create_dir_all(&metadata).map_err(io_err(&metadata))?;
    let record = metadata.join(DATACITE_FILE_NAME);
    fs::write(&record, datacite_xml).map_err(io_err(&record))?;

    let tag_files = tag_files(dest)?;
    write_manifests(dest, &algorithms, &tag_files, tagmanifest_name)?;

    Ok(Bag {
        root: dest.to_path_buf(),
        algorithms,
        payload,
        info,
    })
}

/// Every file outside `data/` except the tag manifests themselves.
pub(crate) fn tag_files(root: &Path) -> Result<Vec<(String, PathBuf)>, BagError> {
    Ok(files_under(root)?
        .into_iter()
        .filter(|(rel, _)| {
            !rel.starts_with(&format!("{PAYLOAD_DIR}/"))
                && !(rel.starts_with("tagmanifest-") && !rel.contains('/'))
        })
        .collect())
}
