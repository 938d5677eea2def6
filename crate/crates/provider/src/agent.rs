use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;
use std::time::Duration;

use mobidesc_core::codec::{self, WireDocument};
use mobidesc_core::model::NodeValue;
use mobidesc_core::{DescriptionDocument, ElementNode, ServiceIdentity, Slot, Timestamp};
use parking_lot::{Mutex, RwLock};

use crate::bundle::{BundleError, ServiceBundle};
use crate::mapping;
use crate::snapshot::{ContextSnapshot, Field, Readings, SnapshotError};

/// A hosted document with its pre-rendered wire form.
#[derive(Debug, Clone, PartialEq)]
pub struct HostedDocument {
    pub doc: DescriptionDocument,
    pub wire: WireDocument,
}

impl HostedDocument {
    fn new(doc: DescriptionDocument) -> Result<Self, codec::CodecError> {
        let wire = codec::serialize(&doc)?;
        Ok(Self { doc, wire })
    }
}

#[derive(Debug, thiserror::Error)]
pub enum AgentError {
    #[error("provider is offline")]
    Offline,
    #[error("{0} is not hosted by this provider")]
    NotHosted(Slot),
    #[error(transparent)]
    InvalidBundle(#[from] BundleError),
    #[error(transparent)]
    InvalidSnapshot(#[from] SnapshotError),
    #[error("updating {slot} failed: {reason}")]
    Update { slot: Slot, reason: String },
}

/// Reputation values re-stamped into a collaborator description.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Reputation {
    pub score: f64,
    pub feedback_count: u64,
}

/// A simulated mobile provider. Readers take an `Arc` to an immutable
/// document; every writer (watchdog, consumption log, collaborator timer)
/// is serialized and replaces whole documents.
pub struct ProviderAgent {
    service: ServiceIdentity,
    docs: RwLock<BTreeMap<Slot, Arc<HostedDocument>>>,
    online: AtomicBool,
    writer: Mutex<Option<ContextSnapshot>>,
}

impl ProviderAgent {
    /// Starts hosting a bundle; the agent starts online.
    pub fn host(bundle: ServiceBundle) -> Result<Self, AgentError> {
        bundle.check()?;
        let mut docs = BTreeMap::new();
        for (slot, doc) in bundle.documents {
            let hosted = HostedDocument::new(doc)
                .map_err(|e| AgentError::InvalidBundle(BundleError::Invalid(format!("{slot}: {e}"))))?;
            docs.insert(slot, Arc::new(hosted));
        }
        Ok(Self {
            service: bundle.service,
            docs: RwLock::new(docs),
            online: AtomicBool::new(true),
            writer: Mutex::new(None),
        })
    }

    pub fn service(&self) -> &ServiceIdentity {
        &self.service
    }

    pub fn is_online(&self) -> bool {
        self.online.load(Ordering::SeqCst)
    }

    pub fn set_online(&self, online: bool) {
        self.online.store(online, Ordering::SeqCst);
    }

    pub fn hosted_slots(&self) -> Vec<Slot> {
        self.docs.read().keys().copied().collect()
    }

    /// Current document regardless of the online flag.
    pub fn document(&self, slot: Slot) -> Option<Arc<HostedDocument>> {
        self.docs.read().get(&slot).cloned()
    }

    /// Current serialized document, as served to consumers.
    pub fn get_document(&self, slot: Slot) -> Result<WireDocument, AgentError> {
        if !self.is_online() {
            return Err(AgentError::Offline);
        }
        self.document(slot)
            .map(|h| h.wire.clone())
            .ok_or(AgentError::NotHosted(slot))
    }

    /// Readings of the last tick, if any.
    pub fn last_snapshot(&self) -> Option<ContextSnapshot> {
        *self.writer.lock()
    }

    fn replace(&self, slot: Slot, doc: DescriptionDocument) -> Result<(), AgentError> {
        let hosted = HostedDocument::new(doc).map_err(|e| AgentError::Update {
            slot,
            reason: e.to_string(),
        })?;
        self.docs.write().insert(slot, Arc::new(hosted));
        Ok(())
    }

    /// Senses a snapshot and rewrites every hosted document fed by a field
    /// that changed since the previous tick. The first tick syncs all
    /// mapped fields. Returns the updated slots with their new timestamps.
    pub fn watchdog_tick(&self, snapshot: ContextSnapshot) -> Result<Vec<(Slot, Timestamp)>, AgentError> {
        snapshot.readings.validate()?;
        let mut last = self.writer.lock();
        if let Some(prev) = *last {
            if snapshot.clock < prev.clock {
                return Err(SnapshotError::ClockRewind {
                    previous: prev.clock,
                    next: snapshot.clock,
                }
                .into());
            }
        }
        let changed = match &*last {
            Some(prev) => snapshot.readings.changed_fields(&prev.readings),
            None => Field::ALL.to_vec(),
        };
        let plan = plan_updates(&changed, &snapshot.readings, &self.hosted_slots());
        let mut report = Vec::new();
        for (slot, values) in plan {
            let current = self.document(slot).expect("planned slots are hosted");
            let stamp = stamp_after(&current.doc, snapshot.clock);
            let next = current
                .doc
                .with_values(&values, stamp)
                .map_err(|e| AgentError::Update {
                    slot,
                    reason: format!("{e:?}"),
                })?;
            self.replace(slot, next)?;
            report.push((slot, stamp));
        }
        *last = Some(snapshot);
        Ok(report)
    }

    /// Whether the collaborator description is due for its periodic refresh.
    pub fn collaborator_due(&self, now: Timestamp) -> bool {
        let Some(hosted) = self.document(Slot::Collaborator) else {
            return false;
        };
        let period = update_frequency(&hosted.doc);
        match (hosted.doc.timestamp(), period) {
            (Some(ts), Some(p)) => now >= ts.plus(p),
            _ => false,
        }
    }

    /// Re-stamps the reputation facet of the collaborator description when
    /// its update period has elapsed. Returns the new timestamp if it ran.
    pub fn refresh_collaborator(
        &self,
        now: Timestamp,
        reputation: Reputation,
    ) -> Result<Option<Timestamp>, AgentError> {
        let _guard = self.writer.lock();
        if !self.collaborator_due(now) {
            return Ok(None);
        }
        let current = self.document(Slot::Collaborator).expect("due implies hosted");
        let stamp = stamp_after(&current.doc, now);
        let values = [
            ("reputationDetail/score", format!("{}", reputation.score)),
            ("reputationDetail/feedbackCount", reputation.feedback_count.to_string()),
        ];
        let next = current
            .doc
            .with_values(&values, stamp)
            .map_err(|e| AgentError::Update {
                slot: Slot::Collaborator,
                reason: format!("{e:?}"),
            })?;
        self.replace(Slot::Collaborator, next)?;
        Ok(Some(stamp))
    }

    /// Logs one invocation by `consumer_id` in the consumer base.
    pub fn record_consumption(&self, consumer_id: &str, at: Timestamp) -> Result<DescriptionDocument, AgentError> {
        let _guard = self.writer.lock();
        let current = self
            .document(Slot::ConsumerBase)
            .ok_or(AgentError::NotHosted(Slot::ConsumerBase))?;
        let stamp = stamp_after(&current.doc, at);
        let mut root = current.doc.root().clone();
        let consumers = root.children_mut().expect("root is a group");
        let existing = consumers
            .iter_mut()
            .find(|c| c.child("id").and_then(ElementNode::as_text) == Some(consumer_id));
        match existing {
            Some(entry) => {
                let kids = entry.children_mut().expect("consumer is a group");
                for kid in kids.iter_mut() {
                    match kid.name.as_str() {
                        "invocationCount" => {
                            let n: u64 = kid.as_text().and_then(|t| t.parse().ok()).unwrap_or(0);
                            kid.value = NodeValue::Text((n + 1).to_string());
                        }
                        "lastInvocation" => kid.value = NodeValue::Text(at.to_string()),
                        _ => {}
                    }
                }
            }
            None => consumers.push(ElementNode::group(
                "consumer",
                vec![
                    ElementNode::text("id", consumer_id, true),
                    ElementNode::text("invocationCount", "1", true),
                    ElementNode::text("lastInvocation", at.to_string(), true),
                ],
                true,
            )),
        }
        let next = current
            .doc
            .with_root(root, Some(stamp))
            .map_err(|e| AgentError::Update {
                slot: Slot::ConsumerBase,
                reason: format!("{e:?}"),
            })?;
        self.replace(Slot::ConsumerBase, next.clone())?;
        Ok(next)
    }
}

/// Timestamps never go backwards, even if a writer reports an instant
/// earlier than the document's current stamp.
fn stamp_after(doc: &DescriptionDocument, at: Timestamp) -> Timestamp {
    doc.timestamp().map_or(at, |t| t.max(at))
}

fn update_frequency(doc: &DescriptionDocument) -> Option<Duration> {
    let secs: f64 = doc.root().child("updateFrequency")?.as_text()?.parse().ok()?;
    (secs > 0.0 && secs.is_finite()).then(|| Duration::from_millis((secs * 1000.0).round() as u64))
}

/// Per hosted slot, the values a tick writes given the changed fields.
pub fn plan_updates(
    changed: &[Field],
    readings: &Readings,
    hosted: &[Slot],
) -> BTreeMap<Slot, Vec<(&'static str, String)>> {
    let mut plan: BTreeMap<Slot, Vec<(&'static str, String)>> = BTreeMap::new();
    for field in changed {
        for slot in mapping::slots_fed_by(*field) {
            if hosted.contains(slot) {
                plan.entry(*slot)
                    .or_default()
                    .extend(mapping::values_for(*field, *slot, readings));
            }
        }
    }
    plan
}
