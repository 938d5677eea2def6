//! HTTP binding of the description wire API: an axum adapter that serves any
//! [`Handler`] and a blocking reqwest [`Transport`].

use std::io;
use std::net::SocketAddr;
use std::sync::Arc;
use std::thread::JoinHandle;
use std::time::Duration;

use axum::body::Bytes;
use axum::extract::{Query, State};
use axum::http::{header, HeaderMap, Method as HttpMethod, StatusCode, Uri};
use axum::response::IntoResponse;
use axum::Router;
use mobidesc_core::wire::{self, Handler, Method, Request, Response, Transport, TransportError};
use tokio::sync::oneshot;

fn method(m: &HttpMethod) -> Option<Method> {
    match *m {
        HttpMethod::GET => Some(Method::Get),
        HttpMethod::POST => Some(Method::Post),
        HttpMethod::DELETE => Some(Method::Delete),
        _ => None,
    }
}

async fn dispatch(
    State(handler): State<Arc<dyn Handler>>,
    http_method: HttpMethod,
    uri: Uri,
    Query(query): Query<Vec<(String, String)>>,
    body: Bytes,
) -> axum::response::Response {
    let Some(method) = method(&http_method) else {
        return (StatusCode::METHOD_NOT_ALLOWED, "method not allowed").into_response();
    };
    let req = Request {
        method,
        path: uri.path().to_string(),
        query,
        body: body.to_vec(),
    };
    // Handlers are synchronous and may touch the disk (the registry journal).
    let resp = match tokio::task::spawn_blocking(move || handler.handle(&req)).await {
        Ok(r) => r,
        Err(e) => return (StatusCode::INTERNAL_SERVER_ERROR, e.to_string()).into_response(),
    };
    let status = StatusCode::from_u16(resp.status).unwrap_or(StatusCode::INTERNAL_SERVER_ERROR);
    let mut headers = HeaderMap::new();
    if let Some(ct) = resp.content_type {
        headers.insert(
            header::CONTENT_TYPE,
            ct.parse().expect("static content types are valid"),
        );
    }
    (status, headers, resp.body).into_response()
}

/// Routes every path and method to `handler`.
pub fn router(handler: Arc<dyn Handler>) -> Router {
    Router::new().fallback(dispatch).with_state(handler)
}

/// Serves `handler` on an already bound listener until the future is dropped.
pub async fn serve(listener: tokio::net::TcpListener, handler: Arc<dyn Handler>) -> io::Result<()> {
    axum::serve(listener, router(handler)).await
}

/// A server running on its own runtime thread, so blocking code (including
/// [`HttpTransport`]) can live in the same process.
pub struct Server {
    addr: SocketAddr,
    shutdown: Option<oneshot::Sender<()>>,
    thread: Option<JoinHandle<io::Result<()>>>,
}

impl Server {
    /// Binds `addr` (port 0 picks a free port) and starts serving.
    pub fn spawn(addr: SocketAddr, handler: Arc<dyn Handler>) -> io::Result<Self> {
        let runtime = tokio::runtime::Builder::new_multi_thread().enable_all().build()?;
        let listener = runtime.block_on(tokio::net::TcpListener::bind(addr))?;
        let addr = listener.local_addr()?;
        let (tx, rx) = oneshot::channel::<()>();
        let thread = std::thread::Builder::new()
            .name(format!("http-{addr}"))
            .spawn(move || {
                runtime.block_on(async move {
                    axum::serve(listener, router(handler))
                        .with_graceful_shutdown(async {
                            let _ = rx.await;
                        })
                        .await
                })
            })?;
        Ok(Self {
            addr,
            shutdown: Some(tx),
            thread: Some(thread),
        })
    }

    pub fn addr(&self) -> SocketAddr {
        self.addr
    }

    /// `http://host:port` of the bound socket.
    pub fn base_url(&self) -> String {
        format!("http://{}", self.addr)
    }

    /// Blocks until the server stops (it only stops on shutdown or error).
    pub fn wait(mut self) -> io::Result<()> {
        match self.thread.take() {
            Some(t) => t
                .join()
                .unwrap_or_else(|_| Err(io::Error::other("server thread panicked"))),
            None => Ok(()),
        }
    }

    pub fn shutdown(mut self) -> io::Result<()> {
        if let Some(tx) = self.shutdown.take() {
            let _ = tx.send(());
        }
        self.wait()
    }
}

impl Drop for Server {
    fn drop(&mut self) {
        if let Some(tx) = self.shutdown.take() {
            let _ = tx.send(());
        }
        if let Some(t) = self.thread.take() {
            let _ = t.join();
        }
    }
}

fn content_type(value: Option<&str>) -> Option<&'static str> {
    let mime = value?.split(';').next()?.trim();
    [wire::XML, wire::JSON, "text/plain"]
        .into_iter()
        .find(|known| known.eq_ignore_ascii_case(mime))
}

/// Blocking HTTP client transport. Must not be used from inside an async
/// runtime.
#[derive(Clone)]
pub struct HttpTransport {
    client: reqwest::blocking::Client,
}

impl HttpTransport {
    pub fn new(timeout: Duration) -> Result<Self, TransportError> {
        let client = reqwest::blocking::Client::builder()
            .timeout(timeout)
            .build()
            .map_err(|e| TransportError::Io(e.to_string()))?;
        Ok(Self { client })
    }
}

impl Transport for HttpTransport {
    fn send(&self, method: Method, url: &str, body: Vec<u8>) -> Result<Response, TransportError> {
        let parsed = reqwest::Url::parse(url).map_err(|_| TransportError::BadUrl(url.to_string()))?;
        let builder = match method {
            Method::Get => self.client.get(parsed),
            Method::Post => self.client.post(parsed).body(body),
            Method::Delete => self.client.delete(parsed),
        };
        let resp = builder.send().map_err(|e| {
            if e.is_connect() {
                TransportError::Unreachable(url.to_string())
            } else {
                TransportError::Io(e.to_string())
            }
        })?;
        let status = resp.status().as_u16();
        let ct = content_type(resp.headers().get(header::CONTENT_TYPE).and_then(|v| v.to_str().ok()));
        let body = resp.bytes().map_err(|e| TransportError::Io(e.to_string()))?.to_vec();
        Ok(Response {
            status,
            content_type: ct,
            body,
        })
    }
}
