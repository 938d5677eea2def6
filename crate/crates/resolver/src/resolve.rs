use std::collections::BTreeMap;
use std::sync::Arc;
use std::time::Duration;

use mobidesc_core::codec::{self, WireDocument};
use mobidesc_core::wire::{Transport, TransportError};
use mobidesc_core::{Clock, DescriptionDocument, DocumentKind, Half, Slot, Timestamp};
use mobidesc_provider::{ProviderClient, ProviderError};
use mobidesc_registry::{ClientError, FindQuery, RegistryClient, ServiceSummary};
use serde::{Deserialize, Serialize};

use crate::merge::merge_split;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Source {
    Registry,
    Provider,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum MissingReason {
    Offline,
    NotHosted,
    LinkBroken,
}

/// One assembled description kind. For split kinds `doc` is the merge of
/// both halves when the provider answered, else the registry's static half.
#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedDocument {
    pub doc: DescriptionDocument,
    pub source: Source,
    pub fetched_at: Timestamp,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ResolvedDescription {
    pub summary: ServiceSummary,
    pub documents: BTreeMap<DocumentKind, ResolvedDocument>,
    pub missing: Vec<(Slot, MissingReason)>,
    /// Registry-held static halves, kept so a refresh can re-merge.
    pub static_halves: BTreeMap<DocumentKind, DescriptionDocument>,
    /// Where the provider serves each kind.
    pub locations: BTreeMap<DocumentKind, String>,
}

impl ResolvedDescription {
    pub fn document(&self, kind: DocumentKind) -> Option<&DescriptionDocument> {
        self.documents.get(&kind).map(|d| &d.doc)
    }

    /// Whether a kind is accounted for, either present or listed missing.
    pub fn covers(&self, kind: DocumentKind) -> bool {
        self.documents.contains_key(&kind) || self.missing.iter().any(|(s, _)| s.kind() == kind)
    }

    fn mark_missing(&mut self, slot: Slot, reason: MissingReason) {
        self.missing.retain(|(s, _)| *s != slot);
        self.missing.push((slot, reason));
        self.missing.sort();
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum ResolveError {
    #[error("registry unreachable: {0}")]
    RegistryUnreachable(TransportError),
    #[error("functional description unavailable: {0}")]
    FunctionalMissing(String),
    #[error("{0} is not held by providers")]
    NotProviderResident(DocumentKind),
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AgeEntry {
    pub age: Duration,
    pub stale: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StalenessReport {
    pub window: Duration,
    pub per_document: BTreeMap<DocumentKind, AgeEntry>,
}

impl StalenessReport {
    pub fn is_stale(&self, kind: DocumentKind) -> bool {
        self.per_document.get(&kind).is_some_and(|a| a.stale)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("clock skew: {kind} stamped {stamped}, evaluated at {now}")]
pub struct ClockSkew {
    pub kind: DocumentKind,
    pub stamped: Timestamp,
    pub now: Timestamp,
}

/// Age of every timestamped document against a freshness window.
pub fn staleness(
    resolved: &ResolvedDescription,
    now: Timestamp,
    window: Duration,
) -> Result<StalenessReport, ClockSkew> {
    let mut per_document = BTreeMap::new();
    for (kind, d) in &resolved.documents {
        let Some(stamped) = d.doc.timestamp() else { continue };
        let age = now.since(stamped).ok_or(ClockSkew {
            kind: *kind,
            stamped,
            now,
        })?;
        per_document.insert(
            *kind,
            AgeEntry {
                age,
                stale: age > window,
            },
        );
    }
    Ok(StalenessReport { window, per_document })
}

fn provider_failure(e: ProviderError) -> MissingReason {
    match e {
        ProviderError::Offline => MissingReason::Offline,
        ProviderError::NotHosted => MissingReason::NotHosted,
        ProviderError::Transport(_) | ProviderError::Unexpected { .. } => MissingReason::LinkBroken,
    }
}

/// Runs the three-step retrieval: find at the registry, functional (and
/// static halves) from the registry, everything else from the provider.
pub struct Resolver {
    registry: RegistryClient,
    provider: ProviderClient,
    clock: Arc<dyn Clock>,
}

impl Resolver {
    pub fn new(registry_base: &str, transport: Arc<dyn Transport>, clock: Arc<dyn Clock>) -> Self {
        Self {
            registry: RegistryClient::new(registry_base, transport.clone()),
            provider: ProviderClient::new(transport),
            clock,
        }
    }

    pub fn registry(&self) -> &RegistryClient {
        &self.registry
    }

    pub fn provider(&self) -> &ProviderClient {
        &self.provider
    }

    pub fn find(&self, query: &FindQuery) -> Result<Vec<ServiceSummary>, ClientError> {
        self.registry.find(query)
    }

    fn registry_doc(&self, summary: &ServiceSummary, slot: Slot) -> Result<Option<DescriptionDocument>, ResolveError> {
        let expected = |doc: &DescriptionDocument| {
            doc.kind() == slot.kind()
                && doc.service().name == summary.service_name
                && doc.service().uri == summary.service_uri
        };
        match self.registry.fetch_document(&summary.service_id, slot) {
            Ok(wire) => match codec::parse(&wire) {
                Ok(doc) if expected(&doc) => Ok(Some(doc)),
                Ok(_) => Err(ResolveError::FunctionalMissing(format!(
                    "registry returned a foreign {slot} document"
                ))),
                Err(e) => Err(ResolveError::FunctionalMissing(format!("{slot}: {e}"))),
            },
            Err(ClientError::Transport(e)) => Err(ResolveError::RegistryUnreachable(e)),
            Err(ClientError::NotStored) => Ok(None),
            Err(e) => Err(ResolveError::FunctionalMissing(e.to_string())),
        }
    }

    fn provider_doc(
        &self,
        summary: &ServiceSummary,
        slot: Slot,
        url: &str,
    ) -> Result<DescriptionDocument, MissingReason> {
        let wire: WireDocument = self.provider.fetch_url(url).map_err(provider_failure)?;
        let doc = codec::parse(&wire).map_err(|_| MissingReason::LinkBroken)?;
        let own = doc.kind() == slot.kind()
            && doc.service().name == summary.service_name
            && doc.service().uri == summary.service_uri
            && (slot.half() != Half::Dynamic || doc.is_pure_half(true));
        own.then_some(doc).ok_or(MissingReason::LinkBroken)
    }

    /// Assembles the full description. Provider failures land in `missing`;
    /// only registry failures abort.
    pub fn resolve(&self, summary: &ServiceSummary) -> Result<ResolvedDescription, ResolveError> {
        let functional = self
            .registry_doc(summary, Slot::Functional)?
            .ok_or_else(|| ResolveError::FunctionalMissing("not stored".into()))?;
        let now = self.clock.now();
        let mut static_halves = BTreeMap::new();
        for slot in [Slot::DataSourceStatic, Slot::HardwareStatic] {
            if let Some(doc) = self.registry_doc(summary, slot)? {
                static_halves.insert(slot.kind(), doc);
            }
        }
        // Locations: first import per kind; the consumer base has no import
        // and lives at the provider endpoint.
        let mut locations: BTreeMap<DocumentKind, String> = BTreeMap::new();
        for link in functional.imports() {
            if let Some(kind) = link.target_kind().filter(|k| *k != DocumentKind::Functional) {
                locations.entry(kind).or_insert_with(|| link.location.clone());
            }
        }
        locations.insert(
            DocumentKind::ConsumerBase,
            ProviderClient::document_url(&summary.provider_endpoint, Slot::ConsumerBase),
        );
        let mut resolved = ResolvedDescription {
            summary: summary.clone(),
            documents: BTreeMap::from([(
                DocumentKind::Functional,
                ResolvedDocument {
                    doc: functional,
                    source: Source::Registry,
                    fetched_at: now,
                },
            )]),
            missing: Vec::new(),
            static_halves,
            locations,
        };
        for kind in DocumentKind::ALL.into_iter().skip(1) {
            self.install(&mut resolved, kind);
        }
        Ok(resolved)
    }

    /// Fetches one provider-resident kind into `resolved`, falling back to
    /// the static half (if any) and recording why the provider copy is absent.
    fn install(&self, resolved: &mut ResolvedDescription, kind: DocumentKind) {
        let slot = kind.provider_slot().expect("non-functional kinds have a provider slot");
        let static_half = resolved.static_halves.get(&kind).cloned();
        let outcome = match resolved.locations.get(&kind) {
            None => Err(MissingReason::NotHosted),
            Some(url) => self
                .provider_doc(&resolved.summary, slot, url)
                .and_then(|dynamic| match &static_half {
                    Some(s) => merge_split(s, &dynamic).map_err(|_| MissingReason::LinkBroken),
                    None => Ok(dynamic),
                }),
        };
        let fetched_at = self.clock.now();
        match outcome {
            Ok(doc) => {
                resolved.missing.retain(|(s, _)| *s != slot);
                resolved.documents.insert(
                    kind,
                    ResolvedDocument {
                        doc,
                        source: Source::Provider,
                        fetched_at,
                    },
                );
            }
            Err(reason) => {
                resolved.mark_missing(slot, reason);
                match static_half {
                    Some(doc) => {
                        resolved.documents.insert(
                            kind,
                            ResolvedDocument {
                                doc,
                                source: Source::Registry,
                                fetched_at,
                            },
                        );
                    }
                    None => {
                        resolved.documents.remove(&kind);
                    }
                }
            }
        }
    }

    /// Re-fetches the listed provider-resident kinds; other kinds are left
    /// as they were.
    pub fn refresh(
        &self,
        resolved: &ResolvedDescription,
        kinds: &[DocumentKind],
    ) -> Result<ResolvedDescription, ResolveError> {
        if let Some(k) = kinds.iter().find(|k| **k == DocumentKind::Functional) {
            return Err(ResolveError::NotProviderResident(*k));
        }
        let mut next = resolved.clone();
        for kind in kinds {
            self.install(&mut next, *kind);
        }
        Ok(next)
    }
}
