use std::net::SocketAddr;
use std::sync::atomic::{AtomicU64, Ordering};
use std::sync::{Arc, Mutex};
use std::thread;

use axum::body::Body;
use axum::extract::{Request, State};
use axum::http::StatusCode;
use axum::middleware::{self, Next};
use axum::response::{IntoResponse, Response};
use axum::Router;
use tokio::sync::oneshot;

/// One request as seen by a mock server.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordedRequest {
    pub method: String,
    /// Raw path, percent-encoding preserved.
    pub path: String,
    pub status: u16,
    /// Whether the request carried the server's credential header.
    pub authenticated: bool,
    /// Whether the response came from a scripted fault.
    pub injected: bool,
    /// Arrival order across every mock server in the process.
    pub seq: u64,
}

impl RecordedRequest {
    pub fn is_mutating(&self) -> bool {
        !matches!(self.method.as_str(), "GET" | "HEAD")
    }
}

static ARRIVALS: AtomicU64 = AtomicU64::new(0);

/// Scripted status that lets the request reach the real handler.
pub const PASS: u16 = 0;

#[derive(Debug, Clone)]
struct Fault {
    method: String,
    path: String,
    status: u16,
}

impl Fault {
    fn matches(&self, method: &str, path: &str) -> bool {
        self.method.eq_ignore_ascii_case(method)
            && match self.path.strip_suffix('*') {
                Some(prefix) => path.starts_with(prefix),
                None => self.path == path,
            }
    }
}

/// Request log and scripted faults shared by both mocks.
#[derive(Default)]
pub(crate) struct Common {
    log: Mutex<Vec<RecordedRequest>>,
    faults: Mutex<Vec<Fault>>,
    auth_header: &'static str,
}

impl Common {
    pub(crate) fn new(auth_header: &'static str) -> Arc<Self> {
        Arc::new(Self {
            auth_header,
            ..Self::default()
        })
    }

    pub(crate) fn requests(&self) -> Vec<RecordedRequest> {
        self.log.lock().unwrap().clone()
    }

    pub(crate) fn clear_requests(&self) {
        self.log.lock().unwrap().clear();
    }

    pub(crate) fn script(&self, method: &str, path: &str, statuses: &[u16]) {
        let mut faults = self.faults.lock().unwrap();
        for &status in statuses {
            faults.push(Fault {
                method: method.to_string(),
                path: path.to_string(),
                status,
            });
        }
    }

    fn take_fault(&self, method: &str, path: &str) -> Option<u16> {
        let mut faults = self.faults.lock().unwrap();
        let index = faults.iter().position(|f| f.matches(method, path))?;
        Some(faults.remove(index).status)
    }
}

async fn record(State(common): State<Arc<Common>>, request: Request, next: Next) -> Response {
    let method = request.method().to_string();
    let path = request.uri().path().to_string();
    let authenticated = request.headers().contains_key(common.auth_header);
    let seq = ARRIVALS.fetch_add(1, Ordering::SeqCst);

    let (response, injected) = match common.take_fault(&method, &path) {
        Some(PASS) | None => (next.run(request).await, false),
        Some(status) => {
            let status = StatusCode::from_u16(status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
            let body = Body::from(format!("{{\"message\":\"injected {}\"}}", status.as_u16()));
            ((status, body).into_response(), true)
        }
    };

    common.log.lock().unwrap().push(RecordedRequest {
        method,
        path,
        status: response.status().as_u16(),
        authenticated,
        injected,
        seq,
    });
    response
}

pub(crate) struct ServerHandle {
    addr: SocketAddr,
    shutdown: Option<oneshot::Sender<()>>,
}

impl ServerHandle {
    pub(crate) fn spawn(router: Router, common: Arc<Common>) -> Self {
        let router = router
            .layer(middleware::from_fn_with_state(common, record))
            .layer(axum::extract::DefaultBodyLimit::disable());
        let listener = std::net::TcpListener::bind("127.0.0.1:0").expect("bind loopback");
        listener.set_nonblocking(true).expect("nonblocking listener");
        let addr = listener.local_addr().expect("local address");
        let (tx, rx) = oneshot::channel::<()>();
        thread::Builder::new()
            .name(format!("mock-{}", addr.port()))
            .spawn(move || {
                let runtime = tokio::runtime::Builder::new_multi_thread()
                    .worker_threads(2)
                    .enable_all()
                    .build()
                    .expect("tokio runtime");
                runtime.block_on(async move {
                    let listener = tokio::net::TcpListener::from_std(listener).expect("tokio listener");
                    let _ = axum::serve(listener, router)
                        .with_graceful_shutdown(async {
                            let _ = rx.await;
                        })
                        .await;
                });
                runtime.shutdown_background();
            })
            .expect("spawn server thread");
        Self {
            addr,
            shutdown: Some(tx),
        }
    }

    pub(crate) fn base_url(&self) -> String {
        format!("http://{}", self.addr)
    }
}

impl Drop for ServerHandle {
    fn drop(&mut self) {
        if let Some(tx) = self.shutdown.take() {
            let _ = tx.send(());
        }
    }
}
