use std::collections::BTreeMap;
use std::path::Path;
use std::sync::Arc;

use mobidesc_core::codec::{self, WireDocument};
use mobidesc_core::model::FunctionalDescription;
use mobidesc_core::{Clock, DocumentKind, Location, ServiceIdentity, Slot, Timestamp};
use parking_lot::{Mutex, RwLock};
use serde::{Deserialize, Serialize};

use crate::journal::{Event, Journal, JournalError};

/// What a provider submits to be listed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PublishRequest {
    pub service_name: String,
    pub service_uri: String,
    pub provider_endpoint: String,
    pub functional: WireDocument,
    pub static_docs: BTreeMap<Slot, WireDocument>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ServiceRecord {
    pub service_id: String,
    pub service_name: String,
    pub service_uri: String,
    pub provider_endpoint: String,
    pub functional: WireDocument,
    pub static_docs: BTreeMap<Slot, WireDocument>,
    pub publish_instant: Timestamp,
    operations: Vec<String>,
}

impl ServiceRecord {
    pub fn summary(&self) -> ServiceSummary {
        ServiceSummary {
            service_id: self.service_id.clone(),
            service_name: self.service_name.clone(),
            service_uri: self.service_uri.clone(),
            provider_endpoint: self.provider_endpoint.clone(),
        }
    }

    /// Operation names declared by the functional description's interfaces.
    pub fn operations(&self) -> &[String] {
        &self.operations
    }
}

#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ServiceSummary {
    pub service_id: String,
    pub service_name: String,
    pub service_uri: String,
    pub provider_endpoint: String,
}

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct FindQuery {
    pub name: Option<String>,
    pub operation: Option<String>,
    pub limit: usize,
}

impl FindQuery {
    pub fn by_name(name: impl Into<String>) -> Self {
        Self {
            name: Some(name.into()),
            operation: None,
            limit: 10,
        }
    }

    pub fn by_operation(op: impl Into<String>) -> Self {
        Self {
            name: None,
            operation: Some(op.into()),
            limit: 10,
        }
    }

    pub fn limit(mut self, limit: usize) -> Self {
        self.limit = limit;
        self
    }
}

#[derive(Debug, thiserror::Error)]
pub enum RegistryError {
    #[error("invalid functional description: {0}")]
    InvalidFunctional(String),
    #[error("malformed provider endpoint {0:?}")]
    MalformedEndpoint(String),
    #[error("invalid static document for {slot}: {reason}")]
    InvalidStaticDoc { slot: Slot, reason: String },
    #[error("invalid query: {0}")]
    InvalidQuery(String),
    #[error("unknown service {0:?}")]
    UnknownService(String),
    #[error("{slot} is held by the provider at {provider_endpoint}")]
    WrongLocation { slot: Slot, provider_endpoint: String },
    #[error("no {slot} document stored for {service_id}")]
    NotStored { service_id: String, slot: Slot },
    #[error(transparent)]
    Journal(#[from] JournalError),
}

#[derive(Default)]
struct State {
    records: BTreeMap<String, Arc<ServiceRecord>>,
    by_identity: BTreeMap<(String, String), String>,
}

/// The registry. Reads work on an immutable snapshot; writes are serialized
/// and swap in a new snapshot only after the journal accepted the event.
pub struct Registry {
    clock: Arc<dyn Clock>,
    state: RwLock<Arc<State>>,
    writer: Mutex<Writer>,
}

struct Writer {
    journal: Option<Journal>,
    next_id: u64,
}

fn check_endpoint(endpoint: &str) -> Result<(), RegistryError> {
    match url::Url::parse(endpoint) {
        Ok(u) if matches!(u.scheme(), "http" | "https") && u.host_str().is_some() => Ok(()),
        _ => Err(RegistryError::MalformedEndpoint(endpoint.to_string())),
    }
}

fn check_request(req: &PublishRequest) -> Result<Vec<String>, RegistryError> {
    check_endpoint(&req.provider_endpoint)?;
    let functional = codec::parse(&req.functional).map_err(|e| RegistryError::InvalidFunctional(e.to_string()))?;
    if functional.kind() != DocumentKind::Functional {
        return Err(RegistryError::InvalidFunctional(format!(
            "root is a {} description",
            functional.kind()
        )));
    }
    let identity = ServiceIdentity::new(&req.service_name, &req.service_uri);
    if functional.service() != &identity {
        return Err(RegistryError::InvalidFunctional(format!(
            "describes {:?} ({}), published as {:?} ({})",
            functional.service().name,
            functional.service().uri,
            identity.name,
            identity.uri
        )));
    }
    for (slot, wire) in &req.static_docs {
        let bad = |reason: String| RegistryError::InvalidStaticDoc { slot: *slot, reason };
        if slot.location() != Location::Registry || *slot == Slot::Functional {
            return Err(bad("only static halves of split documents are held here".into()));
        }
        let doc = codec::parse(wire).map_err(|e| bad(e.to_string()))?;
        if doc.kind() != slot.kind() {
            return Err(bad(format!("document is a {} description", doc.kind())));
        }
        if doc.service() != &identity {
            return Err(bad("service identity differs from the published one".into()));
        }
        if !doc.is_pure_half(false) {
            return Err(bad("contains dynamic entries".into()));
        }
    }
    let operations = FunctionalDescription::from_document(&functional)
        .map(|f| f.operation_names().map(str::to_string).collect())
        .unwrap_or_default();
    Ok(operations)
}

fn numeric_id(id: &str) -> Option<u64> {
    id.strip_prefix("svc-")?.parse().ok()
}

impl Registry {
    /// An in-memory registry without a journal.
    pub fn new(clock: Arc<dyn Clock>) -> Self {
        Self {
            clock,
            state: RwLock::new(Arc::new(State::default())),
            writer: Mutex::new(Writer {
                journal: None,
                next_id: 1,
            }),
        }
    }

    /// Opens (or creates) a journal and replays it.
    pub fn open(path: impl AsRef<Path>, clock: Arc<dyn Clock>) -> Result<Self, RegistryError> {
        let (journal, events) = Journal::open(path.as_ref())?;
        let mut state = State::default();
        let mut next_id = 1;
        for event in events {
            match event {
                Event::Publish(record) => {
                    let request = record.to_request();
                    let operations = check_request(&request)?;
                    next_id = next_id.max(numeric_id(&record.service_id).unwrap_or(0) + 1);
                    install(
                        &mut state,
                        ServiceRecord {
                            service_id: record.service_id,
                            service_name: request.service_name,
                            service_uri: request.service_uri,
                            provider_endpoint: request.provider_endpoint,
                            functional: request.functional,
                            static_docs: request.static_docs,
                            publish_instant: record.publish_instant,
                            operations,
                        },
                    );
                }
                Event::Unpublish { service_id } => remove(&mut state, &service_id),
            }
        }
        Ok(Self {
            clock,
            state: RwLock::new(Arc::new(state)),
            writer: Mutex::new(Writer {
                journal: Some(journal),
                next_id,
            }),
        })
    }

    fn snapshot(&self) -> Arc<State> {
        self.state.read().clone()
    }

    pub fn publish(&self, req: PublishRequest) -> Result<String, RegistryError> {
        let operations = check_request(&req)?;
        let mut writer = self.writer.lock();
        let current = self.snapshot();
        let key = (req.service_name.clone(), req.service_uri.clone());
        let service_id = match current.by_identity.get(&key) {
            Some(id) => id.clone(),
            None => {
                let id = format!("svc-{:06}", writer.next_id);
                writer.next_id += 1;
                id
            }
        };
        let record = ServiceRecord {
            service_id: service_id.clone(),
            service_name: req.service_name,
            service_uri: req.service_uri,
            provider_endpoint: req.provider_endpoint,
            functional: req.functional,
            static_docs: req.static_docs,
            publish_instant: self.clock.now(),
            operations,
        };
        if let Some(journal) = writer.journal.as_mut() {
            journal.append(&Event::publish(&record))?;
        }
        let mut next = clone_state(&current);
        install(&mut next, record);
        *self.state.write() = Arc::new(next);
        Ok(service_id)
    }

    pub fn find(&self, query: &FindQuery) -> Result<Vec<ServiceSummary>, RegistryError> {
        if query.name.is_none() && query.operation.is_none() {
            return Err(RegistryError::InvalidQuery("set a name or an operation".into()));
        }
        if query.limit == 0 {
            return Err(RegistryError::InvalidQuery("limit must be at least 1".into()));
        }
        let state = self.snapshot();
        let mut hits: Vec<ServiceSummary> = state
            .records
            .values()
            .filter(|r| query.name.as_ref().is_none_or(|n| r.service_name.contains(n.as_str())))
            .filter(|r| {
                query
                    .operation
                    .as_ref()
                    .is_none_or(|op| r.operations.iter().any(|o| o == op))
            })
            .map(|r| r.summary())
            .collect();
        hits.sort_by(|a, b| (&a.service_name, &a.service_id).cmp(&(&b.service_name, &b.service_id)));
        hits.truncate(query.limit);
        Ok(hits)
    }

    pub fn fetch_document(&self, service_id: &str, slot: Slot) -> Result<WireDocument, RegistryError> {
        let state = self.snapshot();
        let record = state
            .records
            .get(service_id)
            .ok_or_else(|| RegistryError::UnknownService(service_id.to_string()))?;
        match slot {
            Slot::Functional => Ok(record.functional.clone()),
            _ if slot.location() == Location::Registry => {
                record.static_docs.get(&slot).cloned().ok_or(RegistryError::NotStored {
                    service_id: service_id.to_string(),
                    slot,
                })
            }
            _ => Err(RegistryError::WrongLocation {
                slot,
                provider_endpoint: record.provider_endpoint.clone(),
            }),
        }
    }

    /// Removes a record; unknown ids are accepted silently.
    pub fn unpublish(&self, service_id: &str) -> Result<(), RegistryError> {
        let mut writer = self.writer.lock();
        let current = self.snapshot();
        if !current.records.contains_key(service_id) {
            return Ok(());
        }
        if let Some(journal) = writer.journal.as_mut() {
            journal.append(&Event::Unpublish {
                service_id: service_id.to_string(),
            })?;
        }
        let mut next = clone_state(&current);
        remove(&mut next, service_id);
        *self.state.write() = Arc::new(next);
        Ok(())
    }

    pub fn record(&self, service_id: &str) -> Option<Arc<ServiceRecord>> {
        self.snapshot().records.get(service_id).cloned()
    }

    /// All records, ordered by id.
    pub fn records(&self) -> Vec<Arc<ServiceRecord>> {
        self.snapshot().records.values().cloned().collect()
    }

    pub fn len(&self) -> usize {
        self.snapshot().records.len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Every (service, slot) held in storage.
    pub fn stored_slots(&self) -> Vec<(String, Slot)> {
        self.snapshot()
            .records
            .values()
            .flat_map(|r| {
                std::iter::once((r.service_id.clone(), Slot::Functional))
                    .chain(r.static_docs.keys().map(|s| (r.service_id.clone(), *s)))
            })
            .collect()
    }
}

fn clone_state(s: &State) -> State {
    State {
        records: s.records.clone(),
        by_identity: s.by_identity.clone(),
    }
}

fn install(state: &mut State, record: ServiceRecord) {
    state.by_identity.insert(
        (record.service_name.clone(), record.service_uri.clone()),
        record.service_id.clone(),
    );
    state.records.insert(record.service_id.clone(), Arc::new(record));
}

fn remove(state: &mut State, service_id: &str) {
    if let Some(r) = state.records.remove(service_id) {
        state
            .by_identity
            .remove(&(r.service_name.clone(), r.service_uri.clone()));
    }
}
