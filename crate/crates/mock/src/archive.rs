use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, Mutex};

use axum::body::Bytes;
use axum::extract::{Multipart, Path, State};
use axum::http::{HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, post, put};
use axum::{Json, Router};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::server::{Common, RecordedRequest, ServerHandle};

#[derive(Debug, Clone)]
pub struct MockArchiveConfig {
    pub token: String,
    /// Publish a dataset in review once it has been polled this many times.
    /// Stands in for the curator's click; `None` leaves publication manual.
    pub auto_publish_after_polls: Option<u32>,
    pub doi_prefix: String,
}

impl Default for MockArchiveConfig {
    fn default() -> Self {
        Self {
            token: "mock-archive-token".into(),
            auto_publish_after_polls: None,
            doi_prefix: "10.5072".into(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FileRecord {
    pub name: String,
    pub size: u64,
    pub sha256: String,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetSnapshot {
    pub id: String,
    pub state: String,
    pub doi: Option<String>,
    pub metadata: Option<Value>,
    pub files: Vec<FileRecord>,
    /// Every state the dataset has been in, oldest first.
    pub history: Vec<String>,
}

struct Dataset {
    snapshot: DatasetSnapshot,
    polls: u32,
}

impl Dataset {
    fn set_state(&mut self, state: &str) {
        self.snapshot.state = state.to_string();
        self.snapshot.history.push(state.to_string());
    }
}

#[derive(Default)]
struct ArchiveState {
    token: String,
    auto_publish: Option<u32>,
    doi_prefix: String,
    next_id: u64,
    datasets: BTreeMap<u64, Dataset>,
    corrupt: BTreeSet<String>,
}

type Shared = Arc<Mutex<ArchiveState>>;

/// A research-data archive speaking the reference deposit protocol:
///
/// | request | effect |
/// |---|---|
/// | `POST /datasets` | new draft, `201 {id, state, doi, files, metadata}` |
/// | `PUT /datasets/{id}/metadata` | attach the JSON document; `422 {errors}` if invalid |
/// | `POST /datasets/{id}/files` | multipart field `file`; `201 {name, size, sha256}` |
/// | `POST /datasets/{id}/submit` | draft to `in_review` |
/// | `GET /datasets/{id}` | current dataset |
///
/// Mutations on a dataset that is not a draft answer `409`.
/// Authentication is `Authorization: Bearer <token>`.
pub struct MockArchive {
    state: Shared,
    common: Arc<Common>,
    handle: ServerHandle,
}

impl MockArchive {
    pub fn start() -> Self {
        Self::with_config(MockArchiveConfig::default())
    }

    pub fn with_config(config: MockArchiveConfig) -> Self {
        let state = Arc::new(Mutex::new(ArchiveState {
            token: config.token,
            auto_publish: config.auto_publish_after_polls,
            doi_prefix: config.doi_prefix,
            next_id: 1,
            ..ArchiveState::default()
        }));
        let common = Common::new("authorization");
        let router = Router::new()
            .route("/datasets", post(create))
            .route("/datasets/{id}", get(fetch))
            .route("/datasets/{id}/metadata", put(put_metadata))
            .route("/datasets/{id}/files", post(upload))
            .route("/datasets/{id}/submit", post(submit))
            .with_state(state.clone());
        let handle = ServerHandle::spawn(router, common.clone());
        Self { state, common, handle }
    }

    pub fn base_url(&self) -> String {
        self.handle.base_url()
    }

    pub fn token(&self) -> String {
        self.state.lock().unwrap().token.clone()
    }

    pub fn requests(&self) -> Vec<RecordedRequest> {
        self.common.requests()
    }

    pub fn clear_requests(&self) {
        self.common.clear_requests();
    }

    /// Queues `statuses` as the next responses for `method path`.
    /// A trailing `*` in `path` matches any suffix. [`PASS`](crate::PASS)
    /// entries let a request through, so `[PASS, PASS, 500]` fails the third.
    pub fn script_status(&self, method: &str, path: &str, statuses: &[u16]) {
        self.common.script(method, path, statuses);
    }

    /// Damages the next upload named `file_name` in storage, so the
    /// acknowledged digest differs from the one sent.
    pub fn corrupt_next_upload(&self, file_name: &str) {
        self.state.lock().unwrap().corrupt.insert(file_name.to_string());
    }

    pub fn datasets(&self) -> Vec<DatasetSnapshot> {
        let state = self.state.lock().unwrap();
        state.datasets.values().map(|d| d.snapshot.clone()).collect()
    }

    pub fn dataset(&self, id: &str) -> Option<DatasetSnapshot> {
        let state = self.state.lock().unwrap();
        let id: u64 = id.parse().ok()?;
        state.datasets.get(&id).map(|d| d.snapshot.clone())
    }

    /// The curator's publication click. Only datasets in review can be
    /// published.
    pub fn curator_publish(&self, id: &str) -> Result<String, String> {
        let mut state = self.state.lock().unwrap();
        let prefix = state.doi_prefix.clone();
        let num: u64 = id.parse().map_err(|_| format!("no dataset {id}"))?;
        let dataset = state.datasets.get_mut(&num).ok_or_else(|| format!("no dataset {id}"))?;
        publish(dataset, &prefix)
    }
}

fn publish(dataset: &mut Dataset, prefix: &str) -> Result<String, String> {
    if dataset.snapshot.state != "in_review" {
        return Err(format!(
            "dataset {} is {}, only datasets in review can be published",
            dataset.snapshot.id, dataset.snapshot.state
        ));
    }
    let doi = format!("{prefix}/test.{}", dataset.snapshot.id);
    dataset.snapshot.doi = Some(doi.clone());
    dataset.set_state("published");
    Ok(doi)
}

fn error(status: StatusCode, message: &str) -> Response {
    (status, Json(json!({ "error": message }))).into_response()
}

fn authorize(state: &ArchiveState, headers: &HeaderMap) -> Result<(), Response> {
    let expected = format!("Bearer {}", state.token);
    match headers.get("authorization").and_then(|v| v.to_str().ok()) {
        Some(value) if value == expected => Ok(()),
        _ => Err(error(StatusCode::UNAUTHORIZED, "invalid or missing bearer token")),
    }
}

fn lookup<'a>(state: &'a mut ArchiveState, id: &str) -> Result<&'a mut Dataset, Response> {
    id.parse::<u64>()
        .ok()
        .and_then(|n| state.datasets.get_mut(&n))
        .ok_or_else(|| error(StatusCode::NOT_FOUND, &format!("dataset {id} not found")))
}

fn require_draft(dataset: &Dataset) -> Result<(), Response> {
    if dataset.snapshot.state == "draft" {
        Ok(())
    } else {
        Err(error(
            StatusCode::CONFLICT,
            &format!("dataset {} is {}", dataset.snapshot.id, dataset.snapshot.state),
        ))
    }
}

fn view(d: &DatasetSnapshot) -> Value {
    json!({
        "id": d.id,
        "state": d.state,
        "doi": d.doi,
        "files": d.files,
        "metadata": d.metadata,
    })
}

async fn create(State(state): State<Shared>, headers: HeaderMap) -> Response {
    let mut state = state.lock().unwrap();
    if let Err(resp) = authorize(&state, &headers) {
        return resp;
    }
    let id = state.next_id;
    state.next_id += 1;
    let snapshot = DatasetSnapshot {
        id: id.to_string(),
        state: "draft".into(),
        doi: None,
        metadata: None,
        files: Vec::new(),
        history: vec!["draft".into()],
    };
    let body = view(&snapshot);
    state.datasets.insert(id, Dataset { snapshot, polls: 0 });
    (StatusCode::CREATED, Json(body)).into_response()
}

async fn fetch(State(state): State<Shared>, Path(id): Path<String>, headers: HeaderMap) -> Response {
    let mut state = state.lock().unwrap();
    if let Err(resp) = authorize(&state, &headers) {
        return resp;
    }
    let auto = state.auto_publish;
    let prefix = state.doi_prefix.clone();
    let dataset = match lookup(&mut state, &id) {
        Ok(d) => d,
        Err(resp) => return resp,
    };
    if dataset.snapshot.state == "in_review" {
        dataset.polls += 1;
        if auto.is_some_and(|n| dataset.polls >= n) {
            let _ = publish(dataset, &prefix);
        }
    }
    Json(view(&dataset.snapshot)).into_response()
}

const REQUIRED: [(&str, &str); 5] = [
    ("title", "titles"),
    ("creators", "creators"),
    ("publisher", "publisher"),
    ("publicationYear", "publicationYear"),
    ("resourceType", "resourceType"),
];

fn metadata_errors(doc: &Value) -> Vec<Value> {
    let Some(obj) = doc.as_object() else {
        return vec![json!({ "field": "", "message": "metadata must be a JSON object" })];
    };
    let mut errors = Vec::new();
    for (field, key) in REQUIRED {
        let present = match obj.get(key) {
            None | Some(Value::Null) => false,
            Some(Value::String(s)) => !s.trim().is_empty(),
            Some(Value::Array(a)) => !a.is_empty(),
            Some(_) => true,
        };
        if !present {
            errors.push(json!({ "field": field, "message": format!("{field} is required") }));
        }
    }
    errors
}

async fn put_metadata(
    State(state): State<Shared>,
    Path(id): Path<String>,
    headers: HeaderMap,
    body: Bytes,
) -> Response {
    let mut state = state.lock().unwrap();
    if let Err(resp) = authorize(&state, &headers) {
        return resp;
    }
    let dataset = match lookup(&mut state, &id) {
        Ok(d) => d,
        Err(resp) => return resp,
    };
    if let Err(resp) = require_draft(dataset) {
        return resp;
    }
    let doc: Value = match serde_json::from_slice(&body) {
        Ok(v) => v,
        Err(e) => return error(StatusCode::BAD_REQUEST, &format!("malformed JSON: {e}")),
    };
    let errors = metadata_errors(&doc);
    if !errors.is_empty() {
        return (StatusCode::UNPROCESSABLE_ENTITY, Json(json!({ "errors": errors }))).into_response();
    }
    dataset.snapshot.metadata = Some(doc);
    Json(view(&dataset.snapshot)).into_response()
}

async fn upload(
    State(state): State<Shared>,
    Path(id): Path<String>,
    headers: HeaderMap,
    mut multipart: Multipart,
) -> Response {
    {
        let mut guard = state.lock().unwrap();
        if let Err(resp) = authorize(&guard, &headers) {
            return resp;
        }
        match lookup(&mut guard, &id) {
            Ok(d) => {
                if let Err(resp) = require_draft(d) {
                    return resp;
                }
            }
            Err(resp) => return resp,
        }
    }

    let mut received = None;
    loop {
        match multipart.next_field().await {
            Ok(Some(field)) if field.name() == Some("file") => {
                let name = field.file_name().unwrap_or_default().to_string();
                match field.bytes().await {
                    Ok(bytes) => received = Some((name, bytes)),
                    Err(e) => return error(StatusCode::BAD_REQUEST, &e.to_string()),
                }
            }
            Ok(Some(_)) => {}
            Ok(None) => break,
            Err(e) => return error(StatusCode::BAD_REQUEST, &e.to_string()),
        }
    }
    let Some((name, bytes)) = received else {
        return error(StatusCode::BAD_REQUEST, "multipart field `file` is required");
    };
    if name.is_empty() || name.contains('/') {
        return error(StatusCode::BAD_REQUEST, "file name is required");
    }

    let mut guard = state.lock().unwrap();
    let mut stored = bytes.to_vec();
    if guard.corrupt.remove(&name) {
        match stored.first_mut() {
            Some(b) => *b ^= 0xff,
            None => stored.push(0),
        }
    }
    let record = FileRecord {
        name: name.clone(),
        size: stored.len() as u64,
        sha256: hex::encode(Sha256::digest(&stored)),
    };
    let dataset = match lookup(&mut guard, &id) {
        Ok(d) => d,
        Err(resp) => return resp,
    };
    if let Err(resp) = require_draft(dataset) {
        return resp;
    }
    dataset.snapshot.files.retain(|f| f.name != name);
    dataset.snapshot.files.push(record.clone());
    (StatusCode::CREATED, Json(record)).into_response()
}

async fn submit(State(state): State<Shared>, Path(id): Path<String>, headers: HeaderMap) -> Response {
    let mut state = state.lock().unwrap();
    if let Err(resp) = authorize(&state, &headers) {
        return resp;
    }
    let dataset = match lookup(&mut state, &id) {
        Ok(d) => d,
        Err(resp) => return resp,
    };
    if let Err(resp) = require_draft(dataset) {
        return resp;
    }
    let mut errors = Vec::new();
    if dataset.snapshot.metadata.is_none() {
        errors.push(json!({ "field": "metadata", "message": "no metadata attached" }));
    }
    if dataset.snapshot.files.is_empty() {
        errors.push(json!({ "field": "files", "message": "no files uploaded" }));
    }
    if !errors.is_empty() {
        return (StatusCode::UNPROCESSABLE_ENTITY, Json(json!({ "errors": errors }))).into_response();
    }
    dataset.set_state("in_review");
    Json(view(&dataset.snapshot)).into_response()
}
