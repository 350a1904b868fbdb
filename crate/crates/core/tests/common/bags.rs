//! Random asset sets and an independent recount of bag payloads.

use std::fs;
use std::path::{Path, PathBuf};

use chrono::NaiveDate;
use proptest::prelude::*;
use relpub_core::bagpack::{build_bag, Bag, BagInfo};
use relpub_core::checksum::Algorithm;
use relpub_core::metadata::{Asset, AssetRole, AssetSet};

pub const MAX_FILES: usize = 100;
pub const MAX_BYTES: u64 = 1 << 20;

#[derive(Debug, Clone)]
pub struct AssetSpec {
    pub name: String,
    pub size: usize,
    pub seed: u64,
}

/// Up to [`MAX_FILES`] files with at most [`MAX_BYTES`] in total; names mix
/// spaces, `%`, non-ASCII and the occasional line break.
pub fn asset_specs() -> impl Strategy<Value = Vec<AssetSpec>> {
    (1..=MAX_FILES, 1..=MAX_BYTES).prop_flat_map(|(n, budget)| {
        (
            prop::collection::vec("[A-Za-z0-9 %é中_.\n-]{0,12}", n),
            prop::collection::vec(1u64..1000, n),
            prop::collection::vec(any::<u64>(), n),
        )
            .prop_map(move |(names, weights, seeds)| {
                let total: u64 = weights.iter().sum();
                names
                    .into_iter()
                    .zip(weights)
                    .zip(seeds)
                    .enumerate()
                    .map(|(i, ((token, w), seed))| AssetSpec {
                        name: format!("{i:03}-{token}"),
                        size: (budget * w / total) as usize,
                        seed,
                    })
                    .collect()
            })
    })
}

pub fn bytes(seed: u64, len: usize) -> Vec<u8> {
    let mut state = seed | 1;
    (0..len)
        .map(|_| {
            state ^= state << 13;
            state ^= state >> 7;
            state ^= state << 17;
            state as u8
        })
        .collect()
}

pub fn write_assets(dir: &Path, specs: &[AssetSpec]) -> AssetSet {
    fs::create_dir_all(dir).unwrap();
    let mut set = AssetSet::default();
    for spec in specs {
        let path = dir.join(&spec.name);
        fs::write(&path, bytes(spec.seed, spec.size)).unwrap();
        set.push(Asset::from_file(AssetRole::Other, path, "application/octet-stream").unwrap());
    }
    set
}

pub fn info() -> BagInfo {
    BagInfo::standard(
        NaiveDate::from_ymd_opt(2021, 7, 5).unwrap(),
        "Karlsruhe Institute of Technology (KIT)",
        "releases@example.org",
        Some("openCARP v5.0".into()),
    )
}

pub const RECORD: &[u8] = b"<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<resource xmlns=\"http://datacite.org/schema/kernel-4\"/>\n";

pub fn build(assets: &AssetSet, dest: &Path) -> Bag {
    build_bag(assets, RECORD, &info(), &Algorithm::ALL, dest).unwrap()
}

/// `octets.streams` over `data/`, counted with std only.
pub fn recount_oxum(bag_root: &Path) -> String {
    fn walk(dir: &Path, bytes: &mut u64, files: &mut u64) {
        for entry in fs::read_dir(dir).unwrap() {
            let entry = entry.unwrap();
            let kind = entry.file_type().unwrap();
            if kind.is_dir() {
                walk(&entry.path(), bytes, files);
            } else {
                *bytes += entry.metadata().unwrap().len();
                *files += 1;
            }
        }
    }
    let (mut bytes, mut files) = (0, 0);
    walk(&bag_root.join("data"), &mut bytes, &mut files);
    format!("{bytes}.{files}")
}

pub fn bag_info_value(bag_root: &Path, label: &str) -> Option<String> {
    let text = fs::read_to_string(bag_root.join("bag-info.txt")).unwrap();
    text.lines()
        .find_map(|l| l.strip_prefix(&format!("{label}: ")).map(str::to_string))
}

/// Flips one byte of the `pick`-th non-empty payload file; returns its path.
pub fn tamper(bag_root: &Path, pick: usize, offset: usize) -> Option<PathBuf> {
    let mut files: Vec<PathBuf> = fs::read_dir(bag_root.join("data"))
        .unwrap()
        .map(|e| e.unwrap().path())
        .filter(|p| fs::metadata(p).unwrap().len() > 0)
        .collect();
    files.sort();
    if files.is_empty() {
        return None;
    }
    let path = files[pick % files.len()].clone();
    let mut content = fs::read(&path).unwrap();
    let at = offset % content.len();
    content[at] ^= 0x01;
    fs::write(&path, content).unwrap();
    Some(path)
}

pub fn reference_assets() -> AssetSet {
    let dir = super::release_fixture();
    relpub_core::metadata::resolve_assets(&dir.join("ASSETS.yml"), &dir).unwrap()
}

pub fn python_bagit_validate(bag_root: &Path) -> Result<String, String> {
    let script = "import sys, bagit\n\
bag = bagit.Bag(sys.argv[1])\n\
try:\n    bag.validate()\nexcept bagit.BagValidationError as e:\n    print(e)\n    for d in getattr(e, 'details', []) or []:\n        print(d)\n    sys.exit(1)\n\
print('valid', bag.version, len(list(bag.payload_files())), 'payload files')\n";
    let out = std::process::Command::new("python3")
        .arg("-c")
        .arg(script)
        .arg(bag_root)
        .output()
        .map_err(|e| format!("cannot run python3: {e}"))?;
    let text = format!("{}{}", String::from_utf8_lossy(&out.stdout), String::from_utf8_lossy(&out.stderr));
    if out.status.success() {
        Ok(text)
    } else {
        Err(text)
    }
}
