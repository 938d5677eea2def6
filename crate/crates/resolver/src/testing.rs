//! Random selection instances and a brute-force reference ranking, shared by
//! the property tests and the acceptance suite.

use std::collections::BTreeMap;
use std::time::Duration;

use mobidesc_core::model::build_document;
use mobidesc_core::{DocumentKind, Entry, ServiceIdentity, Timestamp};
use mobidesc_registry::ServiceSummary;
use rand::seq::SliceRandom;
use rand::Rng;

use crate::resolve::{ResolvedDescription, ResolvedDocument, Source};
use crate::select::{Bound, Comparator, Predicate, Preference, SelectionCriteria};

pub struct Instance {
    pub now: Timestamp,
    pub candidates: Vec<ResolvedDescription>,
    pub criteria: SelectionCriteria,
}

const NAMES: [&str; 3] = ["Alpha", "Beta", "Gamma"];
const NETWORKS: [&str; 4] = ["WiFi", "GSM", "WiMAX", "None"];
const WINDOW_MS: i64 = 10_000;
// Document ages relative to `now`; negative means stamped in the future.
const AGES_MS: [i64; 6] = [0, 2_000, 9_999, 10_000, 10_001, -1];

fn now() -> Timestamp {
    Timestamp::parse("2015-06-01T12:00:00.000Z").expect("literal")
}

fn candidate<R: Rng>(rng: &mut R, index: usize) -> ResolvedDescription {
    let name = *NAMES.choose(rng).expect("non-empty");
    let service = ServiceIdentity::new(name, format!("urn:service:{}", name.to_lowercase()));
    let summary = ServiceSummary {
        service_id: format!("svc-{:06}", index + 1),
        service_name: name.into(),
        service_uri: service.uri.clone(),
        provider_endpoint: format!("http://p{index}.local"),
    };
    let stamp = |rng: &mut R| now().plus_millis(-*AGES_MS.choose(rng).expect("non-empty"));
    let mut documents = BTreeMap::new();
    let mut put = |kind, entries: Vec<Entry>, at: Timestamp| {
        let doc = build_document(kind, service.clone(), at, entries).expect("generated documents are valid");
        documents.insert(
            kind,
            ResolvedDocument {
                doc,
                source: Source::Provider,
                fetched_at: now(),
            },
        );
    };
    if rng.gen_bool(0.85) {
        let mut qos = Vec::new();
        if rng.gen_bool(0.8) {
            qos.push(Entry::text("availability", rng.gen_range(0..=4) as f64 / 4.0));
        }
        if rng.gen_bool(0.8) {
            qos.push(Entry::text("throughput", rng.gen_range(0..=5) * 20));
        }
        let at = stamp(rng);
        put(DocumentKind::NonFunctional, vec![Entry::group("serviceQoS", qos)], at);
    }
    if rng.gen_bool(0.85) {
        let mut device = Vec::new();
        if rng.gen_bool(0.8) {
            device.push(Entry::text("batteryStatus", rng.gen_range(0..=10) * 10));
        }
        if rng.gen_bool(0.8) {
            device.push(Entry::text("networkType", *NETWORKS.choose(rng).expect("non-empty")));
        }
        let at = stamp(rng);
        put(
            DocumentKind::Contextual,
            vec![Entry::group("deviceContext", device)],
            at,
        );
    }
    ResolvedDescription {
        summary,
        documents,
        missing: Vec::new(),
        static_halves: BTreeMap::new(),
        locations: BTreeMap::new(),
    }
}

fn predicate<R: Rng>(rng: &mut R) -> Predicate {
    let (kind, path, bound) = match rng.gen_range(0..5) {
        0 => (
            DocumentKind::NonFunctional,
            "serviceQoS/availability",
            Bound::Number(rng.gen_range(0..=4) as f64 / 4.0),
        ),
        1 => (
            DocumentKind::NonFunctional,
            "serviceQoS/throughput",
            Bound::Number((rng.gen_range(0..=5) * 20) as f64),
        ),
        2 => (
            DocumentKind::Contextual,
            "deviceContext/batteryStatus",
            Bound::Number((rng.gen_range(0..=10) * 10) as f64),
        ),
        3 => (
            DocumentKind::Contextual,
            "deviceContext/networkType",
            Bound::Text(NETWORKS.choose(rng).expect("non-empty").to_string()),
        ),
        // Never present in generated candidates.
        _ => (DocumentKind::Business, "cost/price/amount", Bound::Number(1.0)),
    };
    Predicate {
        kind,
        path: path.parse().expect("literal path"),
        op: *Comparator::ALL.choose(rng).expect("non-empty"),
        bound,
    }
}

/// Up to 10 candidates and up to 8 predicates in total; soft weights are
/// multiples of 1/8 so sums are exact in binary floating point.
pub fn random_instance<R: Rng>(rng: &mut R) -> Instance {
    let candidates = (0..rng.gen_range(0..=10)).map(|i| candidate(rng, i)).collect();
    let total = rng.gen_range(0..=8);
    let hard_count = rng.gen_range(0..=total.min(3));
    let mut criteria = SelectionCriteria::new(Duration::from_millis(WINDOW_MS as u64));
    criteria.hard = (0..hard_count).map(|_| predicate(rng)).collect();
    criteria.soft = (hard_count..total)
        .map(|_| Preference {
            predicate: predicate(rng),
            weight: rng.gen_range(1..=40) as f64 / 8.0,
        })
        .collect();
    Instance {
        now: now(),
        candidates,
        criteria,
    }
}

/// Evaluates one predicate from first principles, without sharing code with
/// the selector.
pub fn oracle_holds(p: &Predicate, c: &ResolvedDescription, now: Timestamp, window: Duration) -> bool {
    let Some(entry) = c.documents.get(&p.kind) else {
        return false;
    };
    if let Some(ts) = entry.doc.timestamp() {
        let age = now.as_millis() - ts.as_millis();
        if age < 0 || age as u128 > window.as_millis() {
            return false;
        }
    }
    let Some(text) = entry.doc.element_at(&p.path.to_string()).ok().and_then(|n| n.as_text()) else {
        return false;
    };
    let (less, equal) = match &p.bound {
        Bound::Number(b) => match text.trim().parse::<f64>() {
            Ok(v) if v.is_finite() => (v < *b, v == *b),
            _ => return false,
        },
        Bound::Text(b) => (text < b.as_str(), text == b.as_str()),
    };
    match p.op {
        Comparator::Lt => less,
        Comparator::Le => less || equal,
        Comparator::Eq => equal,
        Comparator::Ne => !equal,
        Comparator::Ge => !less,
        Comparator::Gt => !less && !equal,
    }
}

/// Reference ranking: `(service_id, score)` in rank order.
pub fn oracle_select(instance: &Instance) -> Vec<(String, f64)> {
    let window = instance.criteria.freshness_window;
    let mut survivors: Vec<(&ResolvedDescription, f64)> = Vec::new();
    for c in &instance.candidates {
        let mut keep = true;
        for p in &instance.criteria.hard {
            if !oracle_holds(p, c, instance.now, window) {
                keep = false;
            }
        }
        if !keep {
            continue;
        }
        let mut score = 0.0;
        for s in &instance.criteria.soft {
            if oracle_holds(&s.predicate, c, instance.now, window) {
                score += s.weight;
            }
        }
        survivors.push((c, score));
    }
    // Selection sort on (score desc, name asc, id asc).
    let mut out = Vec::new();
    while !survivors.is_empty() {
        let mut best = 0;
        for i in 1..survivors.len() {
            let (a, sa) = survivors[i];
            let (b, sb) = survivors[best];
            let better = sa > sb
                || (sa == sb
                    && (a.summary.service_name < b.summary.service_name
                        || (a.summary.service_name == b.summary.service_name
                            && a.summary.service_id < b.summary.service_id)));
            if better {
                best = i;
            }
        }
        let (c, score) = survivors.remove(best);
        out.push((c.summary.service_id.clone(), score));
    }
    out
}

/// The same instance with every soft weight multiplied by `factor`.
pub fn scaled(instance: &Instance, factor: f64) -> Instance {
    let mut criteria = instance.criteria.clone();
    for s in &mut criteria.soft {
        s.weight *= factor;
    }
    Instance {
        now: instance.now,
        candidates: instance.candidates.clone(),
        criteria,
    }
}
