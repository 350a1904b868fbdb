use std::path::{Path, PathBuf};
use std::time::Duration;

use proptest::prelude::*;
use relpub_core::archive::{
    connect, deposit, map_metadata, poll_doi, submit_for_review, upload_assets, AdapterKind, ArchiveAdapter,
    ArchiveTarget, DatasetState, StateFile,
};
use relpub_core::datacite::{build_record, DataCiteRecord};
use relpub_core::http::{HttpClient, RetryPolicy, Secret};
use relpub_core::metadata::{Asset, AssetRole, AssetSet, ReleaseContext};
use relpub_mock::MockArchive;
use serde_json::{json, Value};

pub fn client() -> HttpClient {
    HttpClient::new(RetryPolicy {
        max_attempts: 3,
        base_delay: Duration::from_millis(5),
    })
}

pub fn adapter(mock: &MockArchive) -> Box<dyn ArchiveAdapter> {
    let target = ArchiveTarget::new(mock.base_url(), Secret::new(mock.token()), AdapterKind::GenericRadarLike).unwrap();
    connect(client(), target).unwrap()
}

pub fn listing_record(ctx: ReleaseContext) -> (DataCiteRecord, Value) {
    let (meta, contribs) = super::listing_inputs();
    let record = build_record(&meta, &contribs, &ctx).unwrap();
    let doc = map_metadata(&record, &meta).unwrap();
    (record, doc)
}

/// Archive document for the fixture release.
pub fn doc() -> Value {
    listing_record(super::v50()).1
}

pub fn small_assets(dir: &Path, n: usize) -> AssetSet {
    let mut set = AssetSet::default();
    for i in 0..n {
        let path = dir.join(format!("asset-{i}.bin"));
        std::fs::write(&path, format!("asset {i}")).unwrap();
        set.push(Asset::from_file(AssetRole::Other, path, "application/octet-stream").unwrap());
    }
    set
}

/// Client operations, including ones the lifecycle must refuse.
#[derive(Debug, Clone)]
pub enum Op {
    Create,
    Metadata(usize, bool),
    Upload(usize, usize),
    UploadAll(usize),
    Submit(usize),
    RawSubmit(usize),
    Status(usize),
    Poll(usize),
    Deposit(usize),
}

pub fn op() -> impl Strategy<Value = Op> {
    prop_oneof![
        2 => Just(Op::Create),
        1 => (any::<usize>(), any::<bool>()).prop_map(|(d, ok)| Op::Metadata(d, ok)),
        2 => (any::<usize>(), 0usize..3).prop_map(|(d, f)| Op::Upload(d, f)),
        1 => any::<usize>().prop_map(Op::UploadAll),
        2 => any::<usize>().prop_map(Op::Submit),
        2 => any::<usize>().prop_map(Op::RawSubmit),
        2 => any::<usize>().prop_map(Op::Status),
        1 => any::<usize>().prop_map(Op::Poll),
        1 => (0usize..3).prop_map(Op::Deposit),
    ]
}

pub struct Harness {
    pub mock: MockArchive,
    pub adapter: Box<dyn ArchiveAdapter>,
    pub files: AssetSet,
    pub state: PathBuf,
    pub _dir: tempfile::TempDir,
}

/// Runs `ops`, returning an error message if the client ever sees a
/// published dataset whose history skipped review, or a refused
/// transition that nonetheless changed state.
pub fn run_ops(h: &Harness, ops: &[Op], case: usize) -> Result<(), String> {
    let mut mine: Vec<String> = Vec::new();
    let pick = |mine: &Vec<String>, i: usize| (!mine.is_empty()).then(|| mine[i % mine.len()].clone());
    let mut good = doc();
    good["version"] = json!(format!("case-{case}"));
    let mut bad = good.clone();
    bad.as_object_mut().unwrap().remove("creators");

    for op in ops {
        let before: Vec<_> = mine.iter().map(|id| h.mock.dataset(id).unwrap().state).collect();
        let observed = match op {
            Op::Create => match h.adapter.create() {
                Ok(d) => {
                    mine.push(d.dataset_id.clone());
                    Some(d)
                }
                Err(e) => return Err(format!("create failed: {e}")),
            },
            Op::Metadata(i, ok) => pick(&mine, *i).and_then(|id| h.adapter.attach_metadata(&id, if *ok { &good } else { &bad }).ok()),
            Op::Upload(i, f) => pick(&mine, *i).and_then(|id| {
                let a = &h.files.assets[*f];
                h.adapter.upload(&id, &a.path, &a.file_name(), &a.media_type).ok();
                h.adapter.status(&id).ok()
            }),
            Op::UploadAll(i) => pick(&mine, *i).and_then(|id| upload_assets(h.adapter.as_ref(), &id, &h.files).ok()),
            Op::Submit(i) => pick(&mine, *i).and_then(|id| submit_for_review(h.adapter.as_ref(), &id).ok()),
            Op::RawSubmit(i) => pick(&mine, *i).and_then(|id| h.adapter.submit(&id).ok()),
            Op::Status(i) => pick(&mine, *i).and_then(|id| h.adapter.status(&id).ok()),
            Op::Poll(i) => pick(&mine, *i).and_then(|id| {
                poll_doi(h.adapter.as_ref(), &id, Duration::ZERO, Duration::ZERO).ok()?;
                h.adapter.status(&id).ok()
            }),
            Op::Deposit(t) => {
                let tag = format!("case-{case}-tag-{t}");
                let report = deposit(h.adapter.as_ref(), &h.state, &tag, &good, &h.files).ok();
                if let Some(id) = StateFile::load(&h.state).ok().and_then(|s| s.dataset_for(&tag).map(str::to_string)) {
                    if !mine.contains(&id) {
                        mine.push(id);
                    }
                }
                report.map(|r| r.dataset)
            }
        };

        if let Some(d) = &observed {
            if (d.state == DatasetState::Published) != d.doi.is_some() {
                return Err(format!("dataset {} is {} with doi {:?}", d.dataset_id, d.state, d.doi));
            }
        }
        for (k, id) in mine.iter().enumerate() {
            let snap = h.mock.dataset(id).unwrap();
            let history: Vec<&str> = snap.history.iter().map(String::as_str).collect();
            let allowed = [
                &["draft"][..],
                &["draft", "in_review"][..],
                &["draft", "in_review", "published"][..],
            ];
            if !allowed.contains(&history.as_slice()) {
                return Err(format!("dataset {id} went through {history:?} after {op:?}"));
            }
            if let Some(prev) = before.get(k) {
                let order = |s: &str| ["draft", "in_review", "published"].iter().position(|x| *x == s);
                if order(&snap.state) < order(prev) {
                    return Err(format!("dataset {id} moved back from {prev} to {}", snap.state));
                }
            }
        }
    }
    Ok(())
}

