//! GitLab generic package registry uploads and release creation.

use std::path::Path;

use log::info;
use serde::{Deserialize, Serialize};
use serde_json::json;
use thiserror::Error;

use crate::checksum;
use crate::http::{self, encode_segment, HttpClient, Request, RequestBody, ResponseMode, Secret, TransportError};
use crate::metadata::AssetRole;

#[derive(Debug, Clone)]
pub struct GitLabTarget {
    /// Instance root, e.g. `https://git.example.org`.
    pub base_url: String,
    /// Numeric id or `group/project` path.
    pub project_id: String,
    pub token: Secret,
}

impl GitLabTarget {
    pub fn new(base_url: impl Into<String>, project_id: impl Into<String>, token: Secret) -> Result<Self, GitLabError> {
        let mut base_url: String = base_url.into();
        http::check_base_url(&base_url).map_err(GitLabError::Config)?;
        while base_url.ends_with('/') {
            base_url.pop();
        }
        if let Some(stripped) = base_url.strip_suffix("/api/v4") {
            base_url = stripped.to_string();
        }
        let project_id = project_id.into();
        if project_id.trim().is_empty() {
            return Err(GitLabError::Config("project id is empty".into()));
        }
        Ok(Self {
            base_url,
            project_id,
            token,
        })
    }

    fn project_api(&self) -> String {
        format!("{}/api/v4/projects/{}", self.base_url, encode_segment(&self.project_id))
    }

    /// Stable download URL of a generic package file.
    pub fn package_url(&self, package_name: &str, version: &str, file_name: &str) -> String {
        format!(
            "{}/packages/generic/{}/{}/{}",
            self.project_api(),
            encode_segment(package_name),
            encode_segment(version),
            encode_segment(file_name)
        )
    }

    pub fn releases_url(&self) -> String {
        format!("{}/releases", self.project_api())
    }

    pub fn release_url(&self, tag: &str) -> String {
        format!("{}/releases/{}", self.project_api(), encode_segment(tag))
    }

    fn require_token(&self) -> Result<(), GitLabError> {
        if self.token.is_empty() {
            Err(GitLabError::Auth("no GitLab token configured".into()))
        } else {
            Ok(())
        }
    }

    fn authed(&self, request: Request) -> Request {
        request.header("PRIVATE-TOKEN", self.token.expose())
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AssetLink {
    pub name: String,
    pub url: String,
    #[serde(default = "default_link_type")]
    pub link_type: String,
}

fn default_link_type() -> String {
    "other".into()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ReleaseRecord {
    pub tag_name: String,
    pub name: String,
    pub description: String,
    pub asset_links: Vec<AssetLink>,
}

impl ReleaseRecord {
    fn to_request_json(&self) -> serde_json::Value {
        json!({
            "tag_name": self.tag_name,
            "name": self.name,
            "description": self.description,
            "assets": { "links": self.asset_links },
        })
    }

    fn from_response_json(value: &serde_json::Value) -> Option<Self> {
        #[derive(Deserialize)]
        struct Assets {
            #[serde(default)]
            links: Vec<AssetLink>,
        }
        #[derive(Deserialize)]
        struct Echo {
            tag_name: String,
            #[serde(default)]
            name: Option<String>,
            #[serde(default)]
            description: Option<String>,
            #[serde(default)]
            assets: Option<Assets>,
        }
        let echo: Echo = serde_json::from_value(value.clone()).ok()?;
        Some(Self {
            tag_name: echo.tag_name,
            name: echo.name.unwrap_or_default(),
            description: echo.description.unwrap_or_default(),
            asset_links: echo.assets.map(|a| a.links).unwrap_or_default(),
        })
    }

    fn same_content(&self, other: &ReleaseRecord) -> bool {
        let key = |l: &AssetLink| (l.name.clone(), l.url.clone(), l.link_type.clone());
        let mut a: Vec<_> = self.asset_links.iter().map(key).collect();
        let mut b: Vec<_> = other.asset_links.iter().map(key).collect();
        a.sort();
        b.sort();
        self.tag_name == other.tag_name
            && self.name == other.name
            && self.description.trim_end() == other.description.trim_end()
            && a == b
    }
}

#[derive(Debug, Error)]
pub enum GitLabError {
    #[error("invalid GitLab configuration: {0}")]
    Config(String),
    #[error("GitLab rejected the credentials: {0}")]
    Auth(String),
    #[error("conflict: {0}")]
    Conflict(String),
    #[error("tag `{tag}` not found: {message}")]
    TagNotFound { tag: String, message: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: std::path::PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("unexpected HTTP {status} from {url}: {body}")]
    Unexpected { status: u16, url: String, body: String },
    #[error(transparent)]
    Transport(#[from] TransportError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum UploadOutcome {
    Uploaded,
    /// The registry already held a file with the same SHA-256.
    AlreadyPresent,
}

/// Uploads one file to the generic package registry and returns its
/// download URL.
///
/// The registry is probed first, so re-running with identical content is a
/// read-only no-op. Different content under the same name is a conflict
/// unless `overwrite` is set.
pub fn upload_package(
    client: &HttpClient,
    target: &GitLabTarget,
    package_name: &str,
    version: &str,
    file: &Path,
    overwrite: bool,
) -> Result<(String, UploadOutcome), GitLabError> {
    target.require_token()?;
    let io_err = |source| GitLabError::Io {
        path: file.to_path_buf(),
        source,
    };
    let file_name = file
        .file_name()
        .map(|n| n.to_string_lossy().into_owned())
        .ok_or_else(|| io_err(std::io::Error::other("path has no file name")))?;
    let local = checksum::sha256_file(file).map_err(io_err)?;
    let url = target.package_url(package_name, version, &file_name);

    let probe = client.send_with(&target.authed(Request::new("GET", &url)), ResponseMode::Sha256)?;
    match probe.status {
        200..=299 => {
            if probe.body_sha256.as_deref() == Some(local.as_str()) {
                info!("{file_name}: already in the package registry");
                return Ok((url, UploadOutcome::AlreadyPresent));
            }
            if !overwrite {
                return Err(GitLabError::Conflict(format!(
                    "package file {package_name}/{version}/{file_name} already exists with different content"
                )));
            }
        }
        401 | 403 => return Err(GitLabError::Auth(status_message(&probe))),
        _ => {}
    }

    let put = target
        .authed(Request::new("PUT", &url))
        .header("Content-Type", "application/octet-stream")
        .body(RequestBody::File(file.to_path_buf()));
    let resp = client.send(&put)?;
    match resp.status {
        200..=299 => {
            info!("{file_name}: uploaded");
            Ok((url, UploadOutcome::Uploaded))
        }
        401 | 403 => Err(GitLabError::Auth(status_message(&resp))),
        409 => Err(GitLabError::Conflict(status_message(&resp))),
        status => Err(GitLabError::Unexpected {
            status,
            url,
            body: resp.text(),
        }),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ReleaseOutcome {
    Created,
    Unchanged,
}

/// Creates the release for `release.tag_name`, or confirms that an
/// identical one exists.
pub fn create_release(
    client: &HttpClient,
    target: &GitLabTarget,
    release: &ReleaseRecord,
) -> Result<(ReleaseRecord, ReleaseOutcome), GitLabError> {
    target.require_token()?;
    let probe = client.send(&target.authed(Request::new("GET", target.release_url(&release.tag_name))))?;
    match probe.status {
        200..=299 => {
            let existing = probe
                .json()
                .as_ref()
                .and_then(ReleaseRecord::from_response_json)
                .ok_or_else(|| GitLabError::Unexpected {
                    status: probe.status,
                    url: target.release_url(&release.tag_name),
                    body: probe.text(),
                })?;
            return if existing.same_content(release) {
                info!("release {}: already exists, unchanged", release.tag_name);
                Ok((existing, ReleaseOutcome::Unchanged))
            } else {
                Err(GitLabError::Conflict(format!(
                    "release {} exists with different content",
                    release.tag_name
                )))
            };
        }
        401 | 403 => return Err(GitLabError::Auth(status_message(&probe))),
        _ => {}
    }

    let url = target.releases_url();
    let resp = client.send(&target.authed(Request::new("POST", &url)).json(&release.to_request_json()))?;
    match resp.status {
        200..=299 => {
            let echo = resp
                .json()
                .as_ref()
                .and_then(ReleaseRecord::from_response_json)
                .ok_or_else(|| GitLabError::Unexpected {
                    status: resp.status,
                    url: url.clone(),
                    body: resp.text(),
                })?;
            info!("release {}: created", release.tag_name);
            Ok((echo, ReleaseOutcome::Created))
        }
        401 | 403 => Err(GitLabError::Auth(status_message(&resp))),
        409 => Err(GitLabError::Conflict(status_message(&resp))),
        400 | 404 | 422 => Err(GitLabError::TagNotFound {
            tag: release.tag_name.clone(),
            message: status_message(&resp),
        }),
        status => Err(GitLabError::Unexpected {
            status,
            url,
            body: resp.text(),
        }),
    }
}

fn status_message(resp: &http::Response) -> String {
    let detail = resp
        .json()
        .and_then(|v| v.get("message").or_else(|| v.get("error")).cloned())
        .map(|m| match m {
            serde_json::Value::String(s) => s,
            other => other.to_string(),
        })
        .unwrap_or_else(|| resp.text());
    format!("HTTP {}: {}", resp.status, detail.trim())
}

/// Release page prose: the changelog when given, else a one-line template.
pub fn release_description(version: &str, changelog: Option<&Path>) -> std::io::Result<String> {
    match changelog {
        Some(path) => std::fs::read_to_string(path),
        None => Ok(format!("Release {version}.")),
    }
}

/// Package names keep `[A-Za-z0-9._-]`; anything else becomes `-`.
pub fn sanitize_package_name(name: &str) -> String {
    let cleaned: String = name
        .trim()
        .chars()
        .map(|c| {
            if c.is_ascii_alphanumeric() || matches!(c, '.' | '_' | '-') {
                c
            } else {
                '-'
            }
        })
        .collect();
    if cleaned.is_empty() {
        "release".into()
    } else {
        cleaned
    }
}

pub fn link_type_for(role: AssetRole) -> &'static str {
    match role {
        AssetRole::Deb | AssetRole::Rpm | AssetRole::MacosPkg | AssetRole::SourceTarball => "package",
        AssetRole::DockerImage => "image",
        _ => "other",
    }
}
