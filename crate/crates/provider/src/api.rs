use std::sync::Arc;

use mobidesc_core::codec::WireDocument;
use mobidesc_core::wire::{self, Handler, Method, Request, Response, Transport, TransportError};
use mobidesc_core::{Clock, Slot};
use serde::{Deserialize, Serialize};

use crate::agent::{AgentError, ProviderAgent};

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ConsumeBody {
    pub consumer_id: String,
}

fn text(status: u16, message: impl ToString) -> Response {
    Response::new(status, "text/plain", message.to_string())
}

/// Serves an agent: `GET /desc/{slot}` and `POST /consume`.
pub struct ProviderHandler {
    agent: Arc<ProviderAgent>,
    clock: Arc<dyn Clock>,
}

impl ProviderHandler {
    pub fn new(agent: Arc<ProviderAgent>, clock: Arc<dyn Clock>) -> Self {
        Self { agent, clock }
    }
}

impl Handler for ProviderHandler {
    fn handle(&self, req: &Request) -> Response {
        match (req.method, req.segments().as_slice()) {
            (Method::Get, ["desc", slot]) => {
                let Ok(slot) = slot.parse::<Slot>() else {
                    return text(400, format!("unknown document kind {slot:?}"));
                };
                match self.agent.get_document(slot) {
                    Ok(doc) => Response::xml(doc.into_bytes()),
                    Err(AgentError::Offline) => text(503, "provider offline"),
                    Err(e) => text(404, e),
                }
            }
            (Method::Post, ["consume"]) => {
                if !self.agent.is_online() {
                    return text(503, "provider offline");
                }
                let body: ConsumeBody = match serde_json::from_slice(&req.body) {
                    Ok(b) => b,
                    Err(e) => return text(400, e),
                };
                match self.agent.record_consumption(&body.consumer_id, self.clock.now()) {
                    Ok(_) => Response::empty(204),
                    Err(e @ AgentError::NotHosted(_)) => text(404, e),
                    Err(e) => text(500, e),
                }
            }
            (_, ["desc", _] | ["consume"]) => text(405, "method not allowed"),
            _ => text(404, format!("no route for {}", req.path)),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum ProviderError {
    #[error("provider offline")]
    Offline,
    #[error("document not hosted")]
    NotHosted,
    #[error(transparent)]
    Transport(#[from] TransportError),
    #[error("unexpected provider response {status}: {message}")]
    Unexpected { status: u16, message: String },
}

fn check(resp: Response) -> Result<Response, ProviderError> {
    match resp.status {
        s if (200..300).contains(&s) => Ok(resp),
        503 => Err(ProviderError::Offline),
        404 => Err(ProviderError::NotHosted),
        status => Err(ProviderError::Unexpected {
            status,
            message: String::from_utf8_lossy(&resp.body).into_owned(),
        }),
    }
}

/// Consumer-side access to provider endpoints.
#[derive(Clone)]
pub struct ProviderClient {
    transport: Arc<dyn Transport>,
}

impl ProviderClient {
    pub fn new(transport: Arc<dyn Transport>) -> Self {
        Self { transport }
    }

    /// URL at which an endpoint serves a slot.
    pub fn document_url(endpoint: &str, slot: Slot) -> String {
        wire::join(endpoint, &format!("desc/{slot}"))
    }

    /// Fetches a document by its full location (as found in an import).
    pub fn fetch_url(&self, url: &str) -> Result<WireDocument, ProviderError> {
        let resp = check(self.transport.send(Method::Get, url, Vec::new())?)?;
        Ok(WireDocument::from_bytes(resp.body))
    }

    pub fn fetch(&self, endpoint: &str, slot: Slot) -> Result<WireDocument, ProviderError> {
        self.fetch_url(&Self::document_url(endpoint, slot))
    }

    pub fn consume(&self, endpoint: &str, consumer_id: &str) -> Result<(), ProviderError> {
        let body = serde_json::to_vec(&ConsumeBody {
            consumer_id: consumer_id.to_string(),
        })
        .expect("serializable");
        check(
            self.transport
                .send(Method::Post, &wire::join(endpoint, "consume"), body)?,
        )?;
        Ok(())
    }
}
