use std::collections::{BTreeMap, BTreeSet};
use std::sync::{Arc, Mutex};

use axum::body::Bytes;
use axum::extract::{Path, State};
use axum::http::{HeaderMap, StatusCode};
use axum::response::{IntoResponse, Response};
use axum::routing::{get, put};
use axum::{Json, Router};
use serde::Deserialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::server::{Common, RecordedRequest, ServerHandle};

#[derive(Debug, Clone)]
pub struct MockGitLabConfig {
    pub token: String,
    /// Accepted project ids (numeric ids or `group/project` paths).
    pub projects: Vec<String>,
    /// Tags that exist in the repository; releases for other tags are rejected.
    pub tags: Vec<String>,
    /// When false a second upload to the same package file is refused.
    pub allow_duplicate_packages: bool,
}

impl Default for MockGitLabConfig {
    fn default() -> Self {
        Self {
            token: "mock-gitlab-token".into(),
            projects: vec!["1".into()],
            tags: vec!["v5.0".into()],
            allow_duplicate_packages: true,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PackageFile {
    pub project: String,
    pub package: String,
    pub version: String,
    pub file_name: String,
    pub sha256: String,
    pub size: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct StoredRelease {
    pub project: String,
    pub json: Value,
}

impl StoredRelease {
    pub fn tag_name(&self) -> &str {
        self.json["tag_name"].as_str().unwrap_or_default()
    }

    pub fn links(&self) -> Vec<Value> {
        self.json["assets"]["links"].as_array().cloned().unwrap_or_default()
    }
}

type PackageKey = (String, String, String, String);

#[derive(Default)]
struct GitLabState {
    token: String,
    projects: BTreeSet<String>,
    tags: BTreeSet<String>,
    allow_duplicates: bool,
    packages: BTreeMap<PackageKey, Vec<u8>>,
    releases: BTreeMap<(String, String), Value>,
    next_link_id: u64,
}

type Shared = Arc<Mutex<GitLabState>>;

/// A GitLab instance serving the generic package registry and release API.
pub struct MockGitLab {
    state: Shared,
    common: Arc<Common>,
    handle: ServerHandle,
}

impl MockGitLab {
    pub fn start() -> Self {
        Self::with_config(MockGitLabConfig::default())
    }

    pub fn with_config(config: MockGitLabConfig) -> Self {
        let state = Arc::new(Mutex::new(GitLabState {
            token: config.token,
            projects: config.projects.into_iter().collect(),
            tags: config.tags.into_iter().collect(),
            allow_duplicates: config.allow_duplicate_packages,
            next_link_id: 1,
            ..GitLabState::default()
        }));
        let common = Common::new("private-token");
        let router = Router::new()
            .route(
                "/api/v4/projects/{id}/packages/generic/{package}/{version}/{file}",
                put(put_package).get(get_package),
            )
            .route("/api/v4/projects/{id}/releases", get(list_releases).post(post_release))
            .route("/api/v4/projects/{id}/releases/{tag}", get(get_release))
            .with_state(state.clone());
        let handle = ServerHandle::spawn(router, common.clone());
        Self { state, common, handle }
    }

    /// Instance root, without `/api/v4`.
    pub fn base_url(&self) -> String {
        self.handle.base_url()
    }

    pub fn token(&self) -> String {
        self.state.lock().unwrap().token.clone()
    }

    pub fn add_tag(&self, tag: &str) {
        self.state.lock().unwrap().tags.insert(tag.to_string());
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

    pub fn packages(&self) -> Vec<PackageFile> {
        let state = self.state.lock().unwrap();
        state
            .packages
            .iter()
            .map(|((project, package, version, file_name), bytes)| PackageFile {
                project: project.clone(),
                package: package.clone(),
                version: version.clone(),
                file_name: file_name.clone(),
                sha256: hex::encode(Sha256::digest(bytes)),
                size: bytes.len(),
            })
            .collect()
    }

    pub fn package_bytes(&self, project: &str, package: &str, version: &str, file: &str) -> Option<Vec<u8>> {
        let key = (project.into(), package.into(), version.into(), file.into());
        self.state.lock().unwrap().packages.get(&key).cloned()
    }

    pub fn releases(&self) -> Vec<StoredRelease> {
        let state = self.state.lock().unwrap();
        state
            .releases
            .iter()
            .map(|((project, _), json)| StoredRelease {
                project: project.clone(),
                json: json.clone(),
            })
            .collect()
    }
}

fn error(status: StatusCode, message: &str) -> Response {
    (status, Json(json!({ "message": message }))).into_response()
}

fn authorize(state: &GitLabState, headers: &HeaderMap, project: &str) -> Result<(), Response> {
    let token = headers.get("private-token").and_then(|v| v.to_str().ok());
    if token != Some(state.token.as_str()) {
        return Err(error(StatusCode::UNAUTHORIZED, "401 Unauthorized"));
    }
    if !state.projects.contains(project) {
        return Err(error(StatusCode::NOT_FOUND, "404 Project Not Found"));
    }
    Ok(())
}

async fn put_package(
    State(state): State<Shared>,
    Path((id, package, version, file)): Path<(String, String, String, String)>,
    headers: HeaderMap,
    body: Bytes,
) -> Response {
    let mut state = state.lock().unwrap();
    if let Err(resp) = authorize(&state, &headers, &id) {
        return resp;
    }
    let key = (id, package, version, file);
    if state.packages.contains_key(&key) && !state.allow_duplicates {
        return error(StatusCode::CONFLICT, "Duplicate package is not allowed");
    }
    state.packages.insert(key, body.to_vec());
    (StatusCode::CREATED, Json(json!({ "message": "201 Created" }))).into_response()
}

async fn get_package(
    State(state): State<Shared>,
    Path((id, package, version, file)): Path<(String, String, String, String)>,
    headers: HeaderMap,
) -> Response {
    let state = state.lock().unwrap();
    if let Err(resp) = authorize(&state, &headers, &id) {
        return resp;
    }
    match state.packages.get(&(id, package, version, file)) {
        Some(bytes) => (StatusCode::OK, bytes.clone()).into_response(),
        None => error(StatusCode::NOT_FOUND, "404 Not Found"),
    }
}

#[derive(Deserialize)]
struct NewLink {
    name: String,
    url: String,
    #[serde(default)]
    link_type: Option<String>,
}

#[derive(Deserialize, Default)]
struct NewAssets {
    #[serde(default)]
    links: Vec<NewLink>,
}

#[derive(Deserialize)]
struct NewRelease {
    tag_name: String,
    #[serde(default)]
    name: Option<String>,
    #[serde(default)]
    description: Option<String>,
    #[serde(default)]
    assets: NewAssets,
}

async fn post_release(
    State(state): State<Shared>,
    Path(id): Path<String>,
    headers: HeaderMap,
    body: Bytes,
) -> Response {
    let mut state = state.lock().unwrap();
    if let Err(resp) = authorize(&state, &headers, &id) {
        return resp;
    }
    let release: NewRelease = match serde_json::from_slice(&body) {
        Ok(r) => r,
        Err(e) => return error(StatusCode::BAD_REQUEST, &format!("malformed body: {e}")),
    };
    if !state.tags.contains(&release.tag_name) {
        return error(StatusCode::BAD_REQUEST, "Ref is not specified and tag does not exist");
    }
    let key = (id.clone(), release.tag_name.clone());
    if state.releases.contains_key(&key) {
        return error(StatusCode::CONFLICT, "Release already exists");
    }
    let mut links = Vec::new();
    for link in release.assets.links {
        let link_id = state.next_link_id;
        state.next_link_id += 1;
        links.push(json!({
            "id": link_id,
            "name": link.name,
            "url": link.url,
            "link_type": link.link_type.unwrap_or_else(|| "other".into()),
        }));
    }
    let stored = json!({
        "tag_name": release.tag_name,
        "name": release.name.unwrap_or_else(|| release.tag_name.clone()),
        "description": release.description.unwrap_or_default(),
        "assets": { "links": links },
    });
    state.releases.insert(key, stored.clone());
    (StatusCode::CREATED, Json(stored)).into_response()
}

async fn get_release(
    State(state): State<Shared>,
    Path((id, tag)): Path<(String, String)>,
    headers: HeaderMap,
) -> Response {
    let state = state.lock().unwrap();
    if let Err(resp) = authorize(&state, &headers, &id) {
        return resp;
    }
    match state.releases.get(&(id, tag)) {
        Some(release) => Json(release.clone()).into_response(),
        None => error(StatusCode::NOT_FOUND, "404 Not Found"),
    }
}

async fn list_releases(State(state): State<Shared>, Path(id): Path<String>, headers: HeaderMap) -> Response {
    let state = state.lock().unwrap();
    if let Err(resp) = authorize(&state, &headers, &id) {
        return resp;
    }
    let list: Vec<Value> = state
        .releases
        .iter()
        .filter(|((project, _), _)| *project == id)
        .map(|(_, v)| v.clone())
        .collect();
    Json(list).into_response()
}
