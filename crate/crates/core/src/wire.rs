//! Transport-neutral request/response plumbing.
//!
//! Registry and provider expose a [`Handler`]; clients talk through a
//! [`Transport`]. The in-process [`Loopback`] and the HTTP transport carry the
//! same bodies, so byte counts taken by [`Metered`] hold for both.

use std::collections::BTreeMap;
use std::sync::Arc;

use parking_lot::{Mutex, RwLock};
use serde::{Deserialize, Serialize};
use url::Url;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Method {
    Get,
    Post,
    Delete,
}

impl Method {
    pub fn as_str(self) -> &'static str {
        match self {
            Method::Get => "GET",
            Method::Post => "POST",
            Method::Delete => "DELETE",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Request {
    pub method: Method,
    pub path: String,
    pub query: Vec<(String, String)>,
    pub body: Vec<u8>,
}

impl Request {
    pub fn new(method: Method, path: impl Into<String>) -> Self {
        Self {
            method,
            path: path.into(),
            query: Vec::new(),
            body: Vec::new(),
        }
    }

    pub fn query_param(&self, key: &str) -> Option<&str> {
        self.query.iter().find(|(k, _)| k == key).map(|(_, v)| v.as_str())
    }

    /// Non-empty path segments.
    pub fn segments(&self) -> Vec<&str> {
        self.path.split('/').filter(|s| !s.is_empty()).collect()
    }
}

pub const XML: &str = "application/xml";
pub const JSON: &str = "application/json";

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Response {
    pub status: u16,
    pub content_type: Option<&'static str>,
    pub body: Vec<u8>,
}

impl Response {
    pub fn new(status: u16, content_type: &'static str, body: impl Into<Vec<u8>>) -> Self {
        Self {
            status,
            content_type: Some(content_type),
            body: body.into(),
        }
    }

    pub fn empty(status: u16) -> Self {
        Self {
            status,
            content_type: None,
            body: Vec::new(),
        }
    }

    pub fn xml(body: impl Into<Vec<u8>>) -> Self {
        Self::new(200, XML, body)
    }

    pub fn is_success(&self) -> bool {
        (200..300).contains(&self.status)
    }
}

/// Server side of the wire API.
pub trait Handler: Send + Sync {
    fn handle(&self, req: &Request) -> Response;
}

impl<H: Handler + ?Sized> Handler for Arc<H> {
    fn handle(&self, req: &Request) -> Response {
        (**self).handle(req)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum TransportError {
    #[error("bad URL {0:?}")]
    BadUrl(String),
    #[error("no endpoint at {0}")]
    Unreachable(String),
    #[error("transport failure: {0}")]
    Io(String),
}

/// Client side of the wire API.
pub trait Transport: Send + Sync {
    fn send(&self, method: Method, url: &str, body: Vec<u8>) -> Result<Response, TransportError>;
}

impl<T: Transport + ?Sized> Transport for Arc<T> {
    fn send(&self, method: Method, url: &str, body: Vec<u8>) -> Result<Response, TransportError> {
        (**self).send(method, url, body)
    }
}

/// Joins a base endpoint and a path without doubling slashes.
pub fn join(base: &str, path: &str) -> String {
    format!("{}/{}", base.trim_end_matches('/'), path.trim_start_matches('/'))
}

/// `host[:port]` of a URL, the key the loopback routes on.
pub fn authority(url: &str) -> Result<String, TransportError> {
    let u = Url::parse(url).map_err(|_| TransportError::BadUrl(url.to_string()))?;
    let host = u.host_str().ok_or_else(|| TransportError::BadUrl(url.to_string()))?;
    Ok(match u.port() {
        Some(p) => format!("{host}:{p}"),
        None => host.to_string(),
    })
}

/// Splits a URL into a [`Request`] with decoded query pairs.
pub fn request_for(method: Method, url: &str, body: Vec<u8>) -> Result<Request, TransportError> {
    let u = Url::parse(url).map_err(|_| TransportError::BadUrl(url.to_string()))?;
    Ok(Request {
        method,
        path: u.path().to_string(),
        query: u.query_pairs().map(|(k, v)| (k.into_owned(), v.into_owned())).collect(),
        body,
    })
}

/// In-process network: endpoints are handlers keyed by URL authority.
#[derive(Default)]
pub struct Loopback {
    hosts: RwLock<BTreeMap<String, Arc<dyn Handler>>>,
}

impl Loopback {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&self, endpoint: &str, handler: Arc<dyn Handler>) -> Result<(), TransportError> {
        self.hosts.write().insert(authority(endpoint)?, handler);
        Ok(())
    }

    pub fn unregister(&self, endpoint: &str) {
        if let Ok(a) = authority(endpoint) {
            self.hosts.write().remove(&a);
        }
    }
}

impl Transport for Loopback {
    fn send(&self, method: Method, url: &str, body: Vec<u8>) -> Result<Response, TransportError> {
        let key = authority(url)?;
        let handler = self
            .hosts
            .read()
            .get(&key)
            .cloned()
            .ok_or(TransportError::Unreachable(key))?;
        let req = request_for(method, url, body)?;
        Ok(handler.handle(&req))
    }
}

/// Request and payload counters.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Traffic {
    pub requests: u64,
    pub request_bytes: u64,
    pub response_bytes: u64,
}

impl Traffic {
    /// Body bytes in both directions.
    pub fn bytes(&self) -> u64 {
        self.request_bytes + self.response_bytes
    }

    pub fn since(&self, earlier: &Traffic) -> Traffic {
        Traffic {
            requests: self.requests - earlier.requests,
            request_bytes: self.request_bytes - earlier.request_bytes,
            response_bytes: self.response_bytes - earlier.response_bytes,
        }
    }
}

/// Counts requests and body bytes flowing through a transport.
pub struct Metered<T> {
    inner: T,
    traffic: Mutex<Traffic>,
}

impl<T> Metered<T> {
    pub fn new(inner: T) -> Self {
        Self {
            inner,
            traffic: Mutex::new(Traffic::default()),
        }
    }

    pub fn traffic(&self) -> Traffic {
        *self.traffic.lock()
    }

    pub fn inner(&self) -> &T {
        &self.inner
    }
}

impl<T: Transport> Transport for Metered<T> {
    fn send(&self, method: Method, url: &str, body: Vec<u8>) -> Result<Response, TransportError> {
        let sent = body.len() as u64;
        let result = self.inner.send(method, url, body);
        let mut t = self.traffic.lock();
        t.requests += 1;
        t.request_bytes += sent;
        if let Ok(r) = &result {
            t.response_bytes += r.body.len() as u64;
        }
        result
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Echo;

    impl Handler for Echo {
        fn handle(&self, req: &Request) -> Response {
            let q = req.query_param("name").unwrap_or("-");
            Response::new(200, JSON, format!("{} {} {q}", req.method.as_str(), req.path))
        }
    }

    #[test]
    fn loopback_routes_by_authority() {
        let net = Loopback::new();
        net.register("http://registry.local:8100", Arc::new(Echo)).unwrap();
        let r = net
            .send(Method::Get, "http://registry.local:8100/find?name=Mall%20Offer", vec![])
            .unwrap();
        assert_eq!(r.body, b"GET /find Mall Offer");
        assert!(matches!(
            net.send(Method::Get, "http://registry.local:8101/find", vec![]),
            Err(TransportError::Unreachable(_))
        ));
        assert!(matches!(
            net.send(Method::Get, "nope", vec![]),
            Err(TransportError::BadUrl(_))
        ));
        net.unregister("http://registry.local:8100/");
        assert!(net.send(Method::Get, "http://registry.local:8100/", vec![]).is_err());
    }

    #[test]
    fn metering_counts_bodies() {
        let net = Loopback::new();
        net.register("http://a", Arc::new(Echo)).unwrap();
        let m = Metered::new(net);
        m.send(Method::Post, "http://a/x", b"12345".to_vec()).unwrap();
        let _ = m.send(Method::Get, "http://b/x", vec![]);
        let t = m.traffic();
        assert_eq!(t.requests, 2);
        assert_eq!(t.request_bytes, 5);
        assert_eq!(t.response_bytes, "POST /x -".len() as u64);
    }

    #[test]
    fn join_paths() {
        assert_eq!(join("http://a:1/", "/desc/x"), "http://a:1/desc/x");
        assert_eq!(join("http://a:1", "desc/x"), "http://a:1/desc/x");
    }
}
