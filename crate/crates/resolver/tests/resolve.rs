mod common;

use std::sync::Arc;
use std::time::Duration;

use common::{functional, t0, World, LINKED, PROVIDER, REGISTRY};
use mobidesc_core::wire::Loopback;
use mobidesc_core::{codec, DocumentKind, LogicalClock, Slot};
use mobidesc_provider::Readings;
use mobidesc_registry::ServiceSummary;
use mobidesc_resolver::{staleness, MissingReason, ResolveError, Resolver, Source};

#[test]
fn full_resolve_places_documents() {
    let w = World::new();
    let r = w.resolver.resolve(&w.summary()).unwrap();
    assert!(r.missing.is_empty(), "{:?}", r.missing);
    assert_eq!(r.documents.len(), 8);
    for (kind, d) in &r.documents {
        let expected = if *kind == DocumentKind::Functional {
            Source::Registry
        } else {
            Source::Provider
        };
        assert_eq!(d.source, expected, "{kind}");
        assert!(d.doc.validate().is_valid());
    }
    assert_eq!(r.document(DocumentKind::Functional), Some(&w.functional));
    let hw = r.document(DocumentKind::Hardware).unwrap();
    assert_eq!(hw, &common::hardware());
    let ds = r.document(DocumentKind::DataSource).unwrap();
    assert_eq!(ds.root().leaves(), common::data_source().root().leaves());
}

#[test]
fn offline_provider_leaves_registry_documents() {
    let w = World::new();
    w.agent.set_online(false);
    let r = w.resolver.resolve(&w.summary()).unwrap();
    let present: Vec<_> = r.documents.iter().map(|(k, d)| (*k, d.source)).collect();
    assert_eq!(
        present,
        [
            (DocumentKind::Functional, Source::Registry),
            (DocumentKind::DataSource, Source::Registry),
            (DocumentKind::Hardware, Source::Registry),
        ]
    );
    let missing: Vec<_> = r.missing.iter().map(|(s, _)| *s).collect();
    assert_eq!(
        missing,
        [
            Slot::NonFunctional,
            Slot::Contextual,
            Slot::Business,
            Slot::DataSourceDynamic,
            Slot::Collaborator,
            Slot::HardwareDynamic,
            Slot::ConsumerBase
        ]
    );
    assert!(r.missing.iter().all(|(_, why)| *why == MissingReason::Offline));
    assert!(DocumentKind::ALL.iter().all(|k| r.covers(*k)));
}

#[test]
fn broken_and_absent_links() {
    let mut f = functional(&LINKED[..4], PROVIDER);
    // Point the business import at a host that does not exist.
    let broken = {
        let wire = codec::serialize(&f).unwrap();
        let text = String::from_utf8(wire.into_bytes()).unwrap();
        let text = text.replace(
            &format!("{PROVIDER}/desc/business"),
            "http://nowhere.local/desc/business",
        );
        codec::parse(&codec::WireDocument::from_bytes(text)).unwrap()
    };
    f = broken;
    let w = World::with_functional(f);
    let r = w.resolver.resolve(&w.summary()).unwrap();
    assert_eq!(
        r.missing,
        [
            (Slot::Business, MissingReason::LinkBroken),
            (Slot::Collaborator, MissingReason::NotHosted),
            (Slot::HardwareDynamic, MissingReason::NotHosted),
        ]
    );
    assert_eq!(r.documents[&DocumentKind::Hardware].source, Source::Registry);
    assert_eq!(r.documents[&DocumentKind::DataSource].source, Source::Provider);
}

#[test]
fn registry_failures_abort() {
    let w = World::new();
    let mut s = w.summary();
    s.service_id = "svc-999999".into();
    assert!(matches!(
        w.resolver.resolve(&s),
        Err(ResolveError::FunctionalMissing(_))
    ));
    let lonely = Resolver::new(REGISTRY, Arc::new(Loopback::new()), Arc::new(LogicalClock::new(t0())));
    assert!(matches!(
        lonely.resolve(&w.summary()),
        Err(ResolveError::RegistryUnreachable(_))
    ));
    let foreign = ServiceSummary {
        service_name: "Other".into(),
        ..w.summary()
    };
    assert!(matches!(
        w.resolver.resolve(&foreign),
        Err(ResolveError::FunctionalMissing(_))
    ));
}

#[test]
fn staleness_arithmetic() {
    let w = World::new();
    let r = w.resolver.resolve(&w.summary()).unwrap();
    let window = Duration::from_secs(10);
    let report = staleness(&r, t0().plus_millis(5_000), window).unwrap();
    assert!(!report.per_document.contains_key(&DocumentKind::Functional));
    let ctx = &report.per_document[&DocumentKind::Contextual];
    assert_eq!(ctx.age, Duration::from_secs(5));
    assert!(!ctx.stale);
    let report = staleness(&r, t0().plus_millis(11_000), window).unwrap();
    assert!(report.is_stale(DocumentKind::Contextual));
    let report = staleness(&r, t0().plus_millis(10_000), window).unwrap();
    assert!(!report.is_stale(DocumentKind::Contextual));
    let skew = staleness(&r, t0().plus_millis(-1), window).unwrap_err();
    assert_eq!(skew.stamped, t0());
}

#[test]
fn refresh_sees_watchdog_updates() {
    let w = World::new();
    let summary = w.summary();
    let before = w.resolver.resolve(&summary).unwrap();
    let functional_bytes = w
        .registry
        .fetch_document(&summary.service_id, Slot::Functional)
        .unwrap();

    assert_eq!(w.resolver.refresh(&before, &[]).unwrap(), before);

    let tick = t0().plus_millis(30_000);
    w.clock.advance_to(tick);
    let low = Readings {
        battery_percent: 41.0,
        ..Readings::default()
    };
    w.agent.watchdog_tick(low.at(tick)).unwrap();
    w.clock.advance_to(tick.plus_millis(500));
    let after = w
        .resolver
        .refresh(&before, &[DocumentKind::Contextual, DocumentKind::Hardware])
        .unwrap();
    let ctx = after.document(DocumentKind::Contextual).unwrap();
    assert!(ctx.timestamp() > before.document(DocumentKind::Contextual).unwrap().timestamp());
    assert_eq!(
        ctx.element_at("deviceContext/batteryStatus").unwrap().as_text(),
        Some("41")
    );
    let hw = after.document(DocumentKind::Hardware).unwrap();
    assert_eq!(
        hw.element_at("powerDetail/batteryPercent").unwrap().as_text(),
        Some("41")
    );
    assert_eq!(hw.element_at("sensorList/sensor/name").unwrap().as_text(), Some("GPS"));
    assert!(
        after.documents[&DocumentKind::Contextual].fetched_at > before.documents[&DocumentKind::Contextual].fetched_at
    );
    assert_eq!(
        after.documents[&DocumentKind::Business],
        before.documents[&DocumentKind::Business]
    );
    assert_eq!(
        w.registry
            .fetch_document(&summary.service_id, Slot::Functional)
            .unwrap(),
        functional_bytes
    );

    assert!(matches!(
        w.resolver.refresh(&before, &[DocumentKind::Functional]),
        Err(ResolveError::NotProviderResident(_))
    ));
}

#[test]
fn refresh_while_offline_and_back() {
    let w = World::new();
    let r = w.resolver.resolve(&w.summary()).unwrap();
    w.agent.set_online(false);
    let off = w
        .resolver
        .refresh(&r, &[DocumentKind::Contextual, DocumentKind::Hardware])
        .unwrap();
    assert_eq!(
        off.missing,
        [
            (Slot::Contextual, MissingReason::Offline),
            (Slot::HardwareDynamic, MissingReason::Offline)
        ]
    );
    assert!(off.document(DocumentKind::Contextual).is_none());
    assert_eq!(off.documents[&DocumentKind::Hardware].source, Source::Registry);
    w.agent.set_online(true);
    let back = w
        .resolver
        .refresh(&off, &[DocumentKind::Contextual, DocumentKind::Hardware])
        .unwrap();
    assert!(back.missing.is_empty());
    assert_eq!(back.documents.len(), 8);
}

#[test]
fn partial_refresh_is_cheaper_than_resolve() {
    let w = World::new();
    let summary = w.summary();
    let start = w.net.traffic();
    let r = w.resolver.resolve(&summary).unwrap();
    let full = w.net.traffic().since(&start);
    let mid = w.net.traffic();
    w.resolver.refresh(&r, &[DocumentKind::Contextual]).unwrap();
    let partial = w.net.traffic().since(&mid);
    assert_eq!(partial.requests, 1);
    assert!(partial.bytes() < full.bytes(), "{partial:?} vs {full:?}");
}
