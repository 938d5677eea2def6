//! Wire API: JSON envelopes for control, raw XML for documents.

use std::collections::BTreeMap;
use std::sync::Arc;

use mobidesc_core::codec::WireDocument;
use mobidesc_core::wire::{self, Handler, Method, Request, Response, Transport, TransportError};
use mobidesc_core::Slot;
use serde::{Deserialize, Serialize};

use crate::store::{FindQuery, PublishRequest, Registry, RegistryError, ServiceSummary};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct PublishBody {
    pub service_name: String,
    pub service_uri: String,
    pub provider_endpoint: String,
    pub functional: String,
    #[serde(default)]
    pub static_docs: BTreeMap<Slot, String>,
}

impl PublishBody {
    fn into_request(self) -> PublishRequest {
        PublishRequest {
            service_name: self.service_name,
            service_uri: self.service_uri,
            provider_endpoint: self.provider_endpoint,
            functional: WireDocument::from_bytes(self.functional),
            static_docs: self
                .static_docs
                .into_iter()
                .map(|(s, x)| (s, WireDocument::from_bytes(x)))
                .collect(),
        }
    }

    fn from_request(req: &PublishRequest) -> Self {
        let text = |w: &WireDocument| String::from_utf8_lossy(w.as_bytes()).into_owned();
        Self {
            service_name: req.service_name.clone(),
            service_uri: req.service_uri.clone(),
            provider_endpoint: req.provider_endpoint.clone(),
            functional: text(&req.functional),
            static_docs: req.static_docs.iter().map(|(s, w)| (*s, text(w))).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Published {
    pub service_id: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ErrorBody {
    pub error: String,
    pub message: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub provider_endpoint: Option<String>,
}

fn json<T: Serialize>(status: u16, value: &T) -> Response {
    Response::new(status, wire::JSON, serde_json::to_vec(value).expect("serializable"))
}

fn error(status: u16, code: &str, message: impl ToString) -> Response {
    json(
        status,
        &ErrorBody {
            error: code.to_string(),
            message: message.to_string(),
            provider_endpoint: None,
        },
    )
}

fn error_response(e: RegistryError) -> Response {
    match &e {
        RegistryError::InvalidFunctional(_) => error(400, "InvalidFunctional", &e),
        RegistryError::MalformedEndpoint(_) => error(400, "MalformedEndpoint", &e),
        RegistryError::InvalidStaticDoc { .. } => error(400, "InvalidStaticDoc", &e),
        RegistryError::InvalidQuery(_) => error(400, "InvalidQuery", &e),
        RegistryError::UnknownService(_) => error(404, "UnknownService", &e),
        RegistryError::NotStored { .. } => error(404, "NotStored", &e),
        RegistryError::WrongLocation { provider_endpoint, .. } => json(
            409,
            &ErrorBody {
                error: "WrongLocation".into(),
                message: e.to_string(),
                provider_endpoint: Some(provider_endpoint.clone()),
            },
        ),
        RegistryError::Journal(_) => error(500, "Journal", &e),
    }
}

/// Serves a [`Registry`] over the wire API.
pub struct RegistryHandler {
    registry: Arc<Registry>,
}

impl RegistryHandler {
    pub fn new(registry: Arc<Registry>) -> Self {
        Self { registry }
    }
}

impl Handler for RegistryHandler {
    fn handle(&self, req: &Request) -> Response {
        match (req.method, req.segments().as_slice()) {
            (Method::Post, ["publish"]) => match serde_json::from_slice::<PublishBody>(&req.body) {
                Ok(body) => match self.registry.publish(body.into_request()) {
                    Ok(service_id) => json(200, &Published { service_id }),
                    Err(e) => error_response(e),
                },
                Err(e) => error(400, "BadRequest", e),
            },
            (Method::Get, ["find"]) => {
                let limit = match req.query_param("limit").map(str::parse::<usize>) {
                    None => 10,
                    Some(Ok(n)) => n,
                    Some(Err(_)) => return error(400, "InvalidQuery", "limit must be a positive integer"),
                };
                let non_empty = |k| req.query_param(k).filter(|v| !v.is_empty()).map(str::to_string);
                let query = FindQuery {
                    name: non_empty("name"),
                    operation: non_empty("op"),
                    limit,
                };
                match self.registry.find(&query) {
                    Ok(hits) => json(200, &hits),
                    Err(e) => error_response(e),
                }
            }
            (Method::Get, ["services", id, "documents", slot]) => match slot.parse::<Slot>() {
                Ok(slot) => match self.registry.fetch_document(id, slot) {
                    Ok(doc) => Response::xml(doc.into_bytes()),
                    Err(e) => error_response(e),
                },
                Err(e) => error(400, "UnknownKind", e),
            },
            (Method::Delete, ["services", id]) => match self.registry.unpublish(id) {
                Ok(()) => Response::empty(204),
                Err(e) => error_response(e),
            },
            (_, ["publish"] | ["find"] | ["services", ..]) => error(405, "MethodNotAllowed", req.path.clone()),
            _ => error(404, "NotFound", req.path.clone()),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ClientError {
    #[error(transparent)]
    Transport(#[from] TransportError),
    #[error("unknown service {0:?}")]
    UnknownService(String),
    #[error("document is held by the provider at {provider_endpoint}")]
    WrongLocation { provider_endpoint: String },
    #[error("document not stored at the registry")]
    NotStored,
    #[error("registry rejected the request ({status} {code}): {message}")]
    Rejected { status: u16, code: String, message: String },
    #[error("undecodable registry response: {0}")]
    Decode(String),
}

/// Talks to a registry through any [`Transport`].
#[derive(Clone)]
pub struct RegistryClient {
    base: String,
    transport: Arc<dyn Transport>,
}

fn failure(resp: Response, service_id: &str) -> ClientError {
    let body: Option<ErrorBody> = serde_json::from_slice(&resp.body).ok();
    match body {
        Some(b) if b.error == "UnknownService" => ClientError::UnknownService(service_id.to_string()),
        Some(b) if b.error == "NotStored" => ClientError::NotStored,
        Some(ErrorBody {
            provider_endpoint: Some(provider_endpoint),
            ..
        }) if resp.status == 409 => ClientError::WrongLocation { provider_endpoint },
        Some(b) => ClientError::Rejected {
            status: resp.status,
            code: b.error,
            message: b.message,
        },
        None => ClientError::Rejected {
            status: resp.status,
            code: String::new(),
            message: String::from_utf8_lossy(&resp.body).into_owned(),
        },
    }
}

fn decode<T: for<'de> Deserialize<'de>>(resp: &Response) -> Result<T, ClientError> {
    serde_json::from_slice(&resp.body).map_err(|e| ClientError::Decode(e.to_string()))
}

impl RegistryClient {
    pub fn new(base: impl Into<String>, transport: Arc<dyn Transport>) -> Self {
        Self {
            base: base.into(),
            transport,
        }
    }

    pub fn base(&self) -> &str {
        &self.base
    }

    pub fn publish(&self, req: &PublishRequest) -> Result<String, ClientError> {
        let body = serde_json::to_vec(&PublishBody::from_request(req)).expect("serializable");
        let resp = self
            .transport
            .send(Method::Post, &wire::join(&self.base, "publish"), body)?;
        if !resp.is_success() {
            return Err(failure(resp, ""));
        }
        Ok(decode::<Published>(&resp)?.service_id)
    }

    pub fn find(&self, query: &FindQuery) -> Result<Vec<ServiceSummary>, ClientError> {
        let mut url =
            url::Url::parse(&wire::join(&self.base, "find")).map_err(|_| TransportError::BadUrl(self.base.clone()))?;
        {
            let mut pairs = url.query_pairs_mut();
            if let Some(n) = &query.name {
                pairs.append_pair("name", n);
            }
            if let Some(op) = &query.operation {
                pairs.append_pair("op", op);
            }
            pairs.append_pair("limit", &query.limit.to_string());
        }
        let resp = self.transport.send(Method::Get, url.as_str(), Vec::new())?;
        if !resp.is_success() {
            return Err(failure(resp, ""));
        }
        decode(&resp)
    }

    pub fn fetch_document(&self, service_id: &str, slot: Slot) -> Result<WireDocument, ClientError> {
        let path = format!("services/{service_id}/documents/{slot}");
        let resp = self
            .transport
            .send(Method::Get, &wire::join(&self.base, &path), Vec::new())?;
        if !resp.is_success() {
            return Err(failure(resp, service_id));
        }
        Ok(WireDocument::from_bytes(resp.body))
    }

    pub fn unpublish(&self, service_id: &str) -> Result<(), ClientError> {
        let path = format!("services/{service_id}");
        let resp = self
            .transport
            .send(Method::Delete, &wire::join(&self.base, &path), Vec::new())?;
        if !resp.is_success() {
            return Err(failure(resp, service_id));
        }
        Ok(())
    }
}
