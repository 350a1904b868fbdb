use std::path::Path;

use serde::Deserialize;
use serde_json::{json, Value};

use super::{ArchiveDataset, ArchiveError, ArchiveTarget, DatasetState, UploadedFile};
use crate::http::{self, encode_segment, HttpClient, Request, Response};

/// The five calls a deposit needs from an archive.
///
/// Implement this to target another repository; the pipeline functions in
/// this module only talk to the trait.
pub trait ArchiveAdapter {
    fn create(&self) -> Result<ArchiveDataset, ArchiveError>;
    fn attach_metadata(&self, dataset_id: &str, doc: &Value) -> Result<ArchiveDataset, ArchiveError>;
    fn upload(&self, dataset_id: &str, file: &Path, name: &str, media_type: &str) -> Result<UploadedFile, ArchiveError>;
    fn submit(&self, dataset_id: &str) -> Result<ArchiveDataset, ArchiveError>;
    fn status(&self, dataset_id: &str) -> Result<ArchiveDataset, ArchiveError>;
}

/// Client for the reference JSON deposit protocol.
pub struct ReferenceAdapter {
    client: HttpClient,
    target: ArchiveTarget,
}

#[derive(Deserialize)]
struct WireDataset {
    id: Value,
    state: DatasetState,
    #[serde(default)]
    doi: Option<String>,
    #[serde(default)]
    metadata: Option<Value>,
    #[serde(default)]
    files: Vec<UploadedFile>,
}

impl ReferenceAdapter {
    pub fn new(client: HttpClient, target: ArchiveTarget) -> Self {
        Self { client, target }
    }

    fn dataset_url(&self, id: &str, suffix: &str) -> String {
        format!("{}/datasets/{}{}", self.target.base_url, encode_segment(id), suffix)
    }

    fn authed(&self, request: Request) -> Request {
        request.header("Authorization", format!("Bearer {}", self.target.token.expose()))
    }

    fn classify(&self, resp: Response, dataset_id: Option<&str>, op: &str) -> Result<Response, ArchiveError> {
        match resp.status {
            200..=299 => Ok(resp),
            401 | 403 => Err(ArchiveError::Auth(format!("HTTP {}: {}", resp.status, resp.text().trim()))),
            404 => Err(ArchiveError::NotFound(dataset_id.unwrap_or("").to_string())),
            409 => Err(ArchiveError::State {
                dataset_id: dataset_id.unwrap_or("").to_string(),
                operation: op.to_string(),
                message: resp.text(),
            }),
            422 if op == "attach metadata" => Err(ArchiveError::ValidationRejected(resp.text())),
            422 => Err(ArchiveError::Precondition(resp.text())),
            status => Err(ArchiveError::Unexpected { status, body: resp.text() }),
        }
    }

    fn dataset(resp: &Response) -> Result<ArchiveDataset, ArchiveError> {
        let wire: WireDataset = serde_json::from_slice(&resp.body).map_err(|e| ArchiveError::Unexpected {
            status: resp.status,
            body: format!("unreadable dataset ({e}): {}", resp.text()),
        })?;
        let dataset_id = match wire.id {
            Value::String(s) => s,
            other => other.to_string(),
        };
        Ok(ArchiveDataset {
            dataset_id,
            state: wire.state,
            doi: wire.doi,
            metadata_payload: wire.metadata,
            uploaded_files: wire.files,
        })
    }
}

impl ArchiveAdapter for ReferenceAdapter {
    fn create(&self) -> Result<ArchiveDataset, ArchiveError> {
        let req = self.authed(Request::new("POST", format!("{}/datasets", self.target.base_url))).json(&json!({}));
        let resp = self.classify(self.client.send(&req)?, None, "create")?;
        Self::dataset(&resp)
    }

    fn attach_metadata(&self, dataset_id: &str, doc: &Value) -> Result<ArchiveDataset, ArchiveError> {
        let req = self.authed(Request::new("PUT", self.dataset_url(dataset_id, "/metadata"))).json(doc);
        let resp = self.classify(self.client.send(&req)?, Some(dataset_id), "attach metadata")?;
        Self::dataset(&resp)
    }

    fn upload(&self, dataset_id: &str, file: &Path, name: &str, media_type: &str) -> Result<UploadedFile, ArchiveError> {
        let (content_type, body) = http::multipart_file("file", name, media_type, file.to_path_buf());
        let req = self
            .authed(Request::new("POST", self.dataset_url(dataset_id, "/files")))
            .header("Content-Type", content_type)
            .body(body);
        let resp = self.classify(self.client.send(&req)?, Some(dataset_id), "upload")?;
        serde_json::from_slice(&resp.body).map_err(|e| ArchiveError::Unexpected {
            status: resp.status,
            body: format!("unreadable upload receipt ({e}): {}", resp.text()),
        })
    }

    fn submit(&self, dataset_id: &str) -> Result<ArchiveDataset, ArchiveError> {
        let req = self.authed(Request::new("POST", self.dataset_url(dataset_id, "/submit")));
        let resp = self.classify(self.client.send(&req)?, Some(dataset_id), "submit")?;
        Self::dataset(&resp)
    }

    fn status(&self, dataset_id: &str) -> Result<ArchiveDataset, ArchiveError> {
        let req = self.authed(Request::new("GET", self.dataset_url(dataset_id, "")));
        let resp = self.classify(self.client.send(&req)?, Some(dataset_id), "status")?;
        Self::dataset(&resp)
    }
}
