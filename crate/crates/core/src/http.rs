//! Blocking HTTP plumbing shared by the GitLab and archive clients:
//! retries with exponential backoff, secret handling, multipart bodies.

use std::fmt;
use std::fs::File;
use std::io::{Cursor, Read};
use std::path::PathBuf;
use std::time::Duration;

use log::debug;
use thiserror::Error;
use ureq::http;

use crate::checksum::{self, Algorithm};

/// A credential that never shows up in `Debug` or `Display` output.
#[derive(Clone, PartialEq, Eq)]
pub struct Secret(String);

impl Secret {
    pub fn new(value: impl Into<String>) -> Self {
        Self(value.into())
    }

    pub fn expose(&self) -> &str {
        &self.0
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }
}

impl fmt::Debug for Secret {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("Secret([redacted])")
    }
}

impl fmt::Display for Secret {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[redacted]")
    }
}

/// Only transport failures and 5xx responses are retried.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RetryPolicy {
    pub max_attempts: u32,
    pub base_delay: Duration,
}

impl Default for RetryPolicy {
    fn default() -> Self {
        Self {
            max_attempts: 3,
            base_delay: Duration::from_millis(500),
        }
    }
}

impl RetryPolicy {
    pub fn delay_before(&self, attempt: u32) -> Duration {
        self.base_delay * 2u32.saturating_pow(attempt.saturating_sub(2))
    }
}

#[derive(Debug, Error)]
pub enum TransportError {
    #[error("{method} {url}: gave up after {attempts} attempt(s): {last}")]
    Exhausted {
        method: String,
        url: String,
        attempts: u32,
        last: String,
    },
    #[error("cannot read request body {path}: {source}")]
    Body {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("{0}")]
    InvalidRequest(String),
}

impl TransportError {
    pub fn attempts(&self) -> u32 {
        match self {
            TransportError::Exhausted { attempts, .. } => *attempts,
            _ => 0,
        }
    }
}

#[derive(Debug, Clone)]
pub enum RequestBody {
    Empty,
    Bytes(Vec<u8>),
    /// Streamed from disk, re-opened on every attempt.
    File(PathBuf),
    /// A file wrapped in a prefix and suffix, e.g. a multipart envelope.
    Wrapped {
        prefix: Vec<u8>,
        file: PathBuf,
        suffix: Vec<u8>,
    },
}

impl RequestBody {
    fn reader(&self) -> Result<Box<dyn Read + Send>, TransportError> {
        let open = |path: &PathBuf| {
            File::open(path).map_err(|source| TransportError::Body {
                path: path.clone(),
                source,
            })
        };
        Ok(match self {
            RequestBody::Empty => Box::new(std::io::empty()),
            RequestBody::Bytes(b) => Box::new(Cursor::new(b.clone())),
            RequestBody::File(path) => Box::new(open(path)?),
            RequestBody::Wrapped {
                prefix,
                file,
                suffix,
            } => Box::new(
                Cursor::new(prefix.clone())
                    .chain(open(file)?)
                    .chain(Cursor::new(suffix.clone())),
            ),
        })
    }

    fn len(&self) -> Result<Option<u64>, TransportError> {
        let size = |path: &PathBuf| {
            std::fs::metadata(path)
                .map(|m| m.len())
                .map_err(|source| TransportError::Body {
                    path: path.clone(),
                    source,
                })
        };
        Ok(match self {
            RequestBody::Empty => None,
            RequestBody::Bytes(b) => Some(b.len() as u64),
            RequestBody::File(p) => Some(size(p)?),
            RequestBody::Wrapped {
                prefix,
                file,
                suffix,
            } => Some(prefix.len() as u64 + size(file)? + suffix.len() as u64),
        })
    }
}

#[derive(Debug, Clone)]
pub struct Request {
    pub method: &'static str,
    pub url: String,
    pub headers: Vec<(String, String)>,
    pub body: RequestBody,
}

impl Request {
    pub fn new(method: &'static str, url: impl Into<String>) -> Self {
        Self {
            method,
            url: url.into(),
            headers: Vec::new(),
            body: RequestBody::Empty,
        }
    }

    pub fn header(mut self, name: &str, value: impl Into<String>) -> Self {
        self.headers.push((name.to_string(), value.into()));
        self
    }

    pub fn json(mut self, value: &serde_json::Value) -> Self {
        self.headers
            .push(("Content-Type".into(), "application/json".into()));
        self.body = RequestBody::Bytes(serde_json::to_vec(value).expect("JSON values serialize"));
        self
    }

    pub fn body(mut self, body: RequestBody) -> Self {
        self.body = body;
        self
    }

    pub fn is_mutating(&self) -> bool {
        !matches!(self.method, "GET" | "HEAD")
    }
}

#[derive(Debug, Clone)]
pub struct Response {
    pub status: u16,
    pub body: Vec<u8>,
    /// Set instead of `body` when the response was hashed while streaming.
    pub body_sha256: Option<String>,
}

impl Response {
    pub fn is_success(&self) -> bool {
        (200..300).contains(&self.status)
    }

    pub fn text(&self) -> String {
        String::from_utf8_lossy(&self.body).into_owned()
    }

    pub fn json(&self) -> Option<serde_json::Value> {
        serde_json::from_slice(&self.body).ok()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResponseMode {
    Buffer,
    Sha256,
}

const BUFFER_LIMIT: u64 = 64 * 1024 * 1024;

#[derive(Debug, Clone)]
pub struct HttpClient {
    agent: ureq::Agent,
    retry: RetryPolicy,
}

impl Default for HttpClient {
    fn default() -> Self {
        Self::new(RetryPolicy::default())
    }
}

impl HttpClient {
    pub fn new(retry: RetryPolicy) -> Self {
        let agent: ureq::Agent = ureq::Agent::config_builder()
            .http_status_as_error(false)
            .timeout_connect(Some(Duration::from_secs(30)))
            .max_redirects(0)
            .build()
            .into();
        Self { agent, retry }
    }

    pub fn retry_policy(&self) -> RetryPolicy {
        self.retry
    }

    pub fn send(&self, request: &Request) -> Result<Response, TransportError> {
        self.send_with(request, ResponseMode::Buffer)
    }

    /// Sends with retries. Returns every non-5xx response, including 4xx,
    /// for the caller to classify.
    pub fn send_with(&self, request: &Request, mode: ResponseMode) -> Result<Response, TransportError> {
        let max = self.retry.max_attempts.max(1);
        let mut last = String::new();
        for attempt in 1..=max {
            if attempt > 1 {
                std::thread::sleep(self.retry.delay_before(attempt));
            }
            debug!("{} {} (attempt {attempt}/{max})", request.method, request.url);
            match self.attempt(request, mode) {
                Ok(resp) if resp.status >= 500 => {
                    last = format!("HTTP {}", resp.status);
                }
                Ok(resp) => return Ok(resp),
                Err(AttemptError::Fatal(e)) => return Err(e),
                Err(AttemptError::Retryable(message)) => last = message,
            }
        }
        Err(TransportError::Exhausted {
            method: request.method.to_string(),
            url: request.url.clone(),
            attempts: max,
            last,
        })
    }

    fn attempt(&self, request: &Request, mode: ResponseMode) -> Result<Response, AttemptError> {
        let mut builder = http::Request::builder()
            .method(request.method)
            .uri(&request.url);
        for (name, value) in &request.headers {
            builder = builder.header(name, value);
        }
        if let Some(len) = request.body.len().map_err(AttemptError::Fatal)? {
            builder = builder.header("Content-Length", len.to_string());
        }
        let reader = request.body.reader().map_err(AttemptError::Fatal)?;
        let http_request = builder
            .body(ureq::SendBody::from_owned_reader(reader))
            .map_err(|e| AttemptError::Fatal(TransportError::InvalidRequest(e.to_string())))?;

        let response = self
            .agent
            .run(http_request)
            .map_err(|e| AttemptError::Retryable(e.to_string()))?;
        let status = response.status().as_u16();
        let mut body = response.into_body();
        match mode {
            ResponseMode::Sha256 if (200..300).contains(&status) => {
                let digest = checksum::digest_reader(Algorithm::Sha256, body.as_reader())
                    .map_err(|e| AttemptError::Retryable(e.to_string()))?;
                Ok(Response {
                    status,
                    body: Vec::new(),
                    body_sha256: Some(digest),
                })
            }
            _ => {
                let bytes = body
                    .with_config()
                    .limit(BUFFER_LIMIT)
                    .read_to_vec()
                    .map_err(|e| AttemptError::Retryable(e.to_string()))?;
                Ok(Response {
                    status,
                    body: bytes,
                    body_sha256: None,
                })
            }
        }
    }
}

enum AttemptError {
    Retryable(String),
    Fatal(TransportError),
}

/// Accepts `https` URLs, and plain `http` only for loopback hosts.
pub fn check_base_url(raw: &str) -> Result<url::Url, String> {
    let url = url::Url::parse(raw).map_err(|e| format!("`{raw}` is not a URL: {e}"))?;
    let loopback = match url.host() {
        Some(url::Host::Domain(d)) => d == "localhost",
        Some(url::Host::Ipv4(ip)) => ip.is_loopback(),
        Some(url::Host::Ipv6(ip)) => ip.is_loopback(),
        None => false,
    };
    match url.scheme() {
        "https" => Ok(url),
        "http" if loopback => Ok(url),
        _ => Err(format!("`{raw}` must use https")),
    }
}

/// A `multipart/form-data` body carrying one file field.
/// Returns the `Content-Type` header value and the body.
pub fn multipart_file(field: &str, file_name: &str, media_type: &str, path: PathBuf) -> (String, RequestBody) {
    let boundary = format!("relpub-{}", &checksum::digest_bytes(Algorithm::Sha256, file_name.as_bytes())[..24]);
    let escaped = file_name.replace('\\', "\\\\").replace('"', "\\\"");
    let prefix = format!(
        "--{boundary}\r\nContent-Disposition: form-data; name=\"{field}\"; filename=\"{escaped}\"\r\nContent-Type: {media_type}\r\n\r\n"
    );
    let suffix = format!("\r\n--{boundary}--\r\n");
    (
        format!("multipart/form-data; boundary={boundary}"),
        RequestBody::Wrapped {
            prefix: prefix.into_bytes(),
            file: path,
            suffix: suffix.into_bytes(),
        },
    )
}

/// Percent-encodes one URL path segment.
pub fn encode_segment(segment: &str) -> String {
    url::form_urlencoded::byte_serialize(segment.as_bytes())
        .collect::<String>()
        .replace('+', "%20")
}
