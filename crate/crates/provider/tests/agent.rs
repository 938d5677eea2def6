mod common;

use std::sync::Arc;

use common::{full_bundle, identity, small_bundle, t0};
use mobidesc_core::codec;
use mobidesc_core::model::build_document;
use mobidesc_core::wire::Loopback;
use mobidesc_core::{DocumentKind, LogicalClock, ServiceIdentity, Slot};
use mobidesc_provider::{
    AgentError, GeoPoint, NetworkType, ProviderAgent, ProviderClient, ProviderError, ProviderHandler, Readings,
    Reputation, ServiceBundle,
};

fn text(agent: &ProviderAgent, slot: Slot, path: &str) -> String {
    agent
        .document(slot)
        .unwrap()
        .doc
        .element_at(path)
        .unwrap()
        .as_text()
        .unwrap()
        .to_string()
}

#[test]
fn hosting_checks_the_bundle() {
    let agent = ProviderAgent::host(full_bundle()).unwrap();
    assert!(agent.is_online());
    assert_eq!(agent.hosted_slots().len(), 7);

    let mut b = full_bundle();
    let other = ServiceIdentity::new("Other", "urn:service:other");
    b.documents.insert(
        Slot::Business,
        build_document(DocumentKind::Business, other, t0(), []).unwrap(),
    );
    assert!(matches!(ProviderAgent::host(b), Err(AgentError::InvalidBundle(_))));

    let mut b = full_bundle();
    let func = build_document(DocumentKind::Contextual, identity(), t0(), []).unwrap();
    b.documents.insert(Slot::Functional, func);
    assert!(matches!(ProviderAgent::host(b), Err(AgentError::InvalidBundle(_))));

    let mut b = full_bundle();
    let ctx = b.documents[&Slot::Contextual].clone();
    b.documents.insert(Slot::Business, ctx);
    assert!(matches!(ProviderAgent::host(b), Err(AgentError::InvalidBundle(_))));

    let agent = ProviderAgent::host(small_bundle()).unwrap();
    assert!(matches!(
        agent.get_document(Slot::DataSourceDynamic),
        Err(AgentError::NotHosted(_))
    ));
}

#[test]
fn serves_canonical_bytes_and_respects_online_flag() {
    let bundle = full_bundle();
    let agent = ProviderAgent::host(bundle.clone()).unwrap();
    let wire = agent.get_document(Slot::Contextual).unwrap();
    assert_eq!(wire, codec::serialize(&bundle.documents[&Slot::Contextual]).unwrap());
    agent.set_online(false);
    agent.set_online(false);
    assert!(matches!(agent.get_document(Slot::Contextual), Err(AgentError::Offline)));
    agent.set_online(true);
    agent.set_online(true);
    assert!(agent.get_document(Slot::Contextual).is_ok());
}

#[test]
fn battery_change_touches_contextual_and_power_only() {
    let agent = ProviderAgent::host(full_bundle()).unwrap();
    let r = Readings {
        battery_percent: 80.0,
        ..Readings::default()
    };
    let first = agent.watchdog_tick(r.at(t0().plus_millis(1000))).unwrap();
    assert_eq!(first.len(), 4, "first tick syncs every fed document");
    let business_stamp = agent.document(Slot::Business).unwrap().doc.timestamp();

    let at = t0().plus_millis(2000);
    let r2 = Readings {
        battery_percent: 60.0,
        ..r
    };
    let updated = agent.watchdog_tick(r2.at(at)).unwrap();
    assert_eq!(updated, [(Slot::Contextual, at), (Slot::HardwareDynamic, at)]);
    assert_eq!(text(&agent, Slot::Contextual, "deviceContext/batteryStatus"), "60");
    assert_eq!(text(&agent, Slot::HardwareDynamic, "powerDetail/batteryPercent"), "60");
    assert_eq!(
        text(&agent, Slot::HardwareDynamic, "powerDetail/estimatedRuntimeMinutes"),
        "360"
    );
    assert_eq!(agent.document(Slot::Business).unwrap().doc.timestamp(), business_stamp);

    assert!(agent.watchdog_tick(r2.at(t0().plus_millis(3000))).unwrap().is_empty());
}

#[test]
fn gps_and_network_changes() {
    let agent = ProviderAgent::host(full_bundle()).unwrap();
    let r = Readings::default();
    agent.watchdog_tick(r.at(t0())).unwrap();
    let moved = Readings {
        gps: GeoPoint { lat: -33.9, lon: 151.3 },
        ..r
    };
    let updated: Vec<Slot> = agent
        .watchdog_tick(moved.at(t0().plus_millis(10)))
        .unwrap()
        .into_iter()
        .map(|u| u.0)
        .collect();
    assert_eq!(updated, [Slot::Contextual, Slot::DataSourceDynamic]);
    assert_eq!(
        text(&agent, Slot::DataSourceDynamic, "locationDetail/gps/latitude"),
        "-33.9"
    );
    assert_eq!(
        text(&agent, Slot::Contextual, "userContext/location/gps/longitude"),
        "151.3"
    );
    assert!(agent.document(Slot::DataSourceDynamic).unwrap().doc.is_pure_half(true));

    let gsm = Readings {
        network_type: NetworkType::Gsm,
        ..moved
    };
    let updated: Vec<Slot> = agent
        .watchdog_tick(gsm.at(t0().plus_millis(20)))
        .unwrap()
        .into_iter()
        .map(|u| u.0)
        .collect();
    assert_eq!(updated, [Slot::NonFunctional, Slot::Contextual]);
    assert_eq!(
        text(&agent, Slot::NonFunctional, "networkQoS/bandwidthCapability"),
        "384"
    );
    assert_eq!(text(&agent, Slot::Contextual, "deviceContext/networkType"), "GSM");
}

#[test]
fn ticks_reject_bad_snapshots() {
    let agent = ProviderAgent::host(full_bundle()).unwrap();
    let bad = Readings {
        battery_percent: 101.0,
        ..Readings::default()
    };
    assert!(matches!(
        agent.watchdog_tick(bad.at(t0())),
        Err(AgentError::InvalidSnapshot(_))
    ));
    agent
        .watchdog_tick(Readings::default().at(t0().plus_millis(5)))
        .unwrap();
    assert!(matches!(
        agent.watchdog_tick(Readings::default().at(t0())),
        Err(AgentError::InvalidSnapshot(_))
    ));
}

#[test]
fn offline_agents_still_tick() {
    let agent = ProviderAgent::host(full_bundle()).unwrap();
    agent.set_online(false);
    assert!(!agent.watchdog_tick(Readings::default().at(t0())).unwrap().is_empty());
    agent.set_online(true);
    assert_eq!(
        codec::parse(&agent.get_document(Slot::Contextual).unwrap())
            .unwrap()
            .timestamp(),
        Some(t0())
    );
}

#[test]
fn consumption_log() {
    let agent = ProviderAgent::host(full_bundle()).unwrap();
    agent.record_consumption("c1", t0().plus_millis(1)).unwrap();
    let doc = agent.record_consumption("c1", t0().plus_millis(2)).unwrap();
    assert_eq!(doc.element_at("consumer/invocationCount").unwrap().as_text(), Some("2"));
    assert_eq!(
        doc.element_at("consumer/lastInvocation").unwrap().as_text(),
        Some("2015-06-01T12:00:00.002Z")
    );
    let doc = agent.record_consumption("c2", t0().plus_millis(3)).unwrap();
    assert_eq!(doc.root().children().len(), 2);
    assert_eq!(doc.timestamp(), Some(t0().plus_millis(3)));

    let small = ProviderAgent::host(small_bundle()).unwrap();
    assert!(matches!(
        small.record_consumption("c1", t0()),
        Err(AgentError::NotHosted(Slot::ConsumerBase))
    ));
}

#[test]
fn collaborator_refreshes_on_its_period() {
    let agent = ProviderAgent::host(full_bundle()).unwrap();
    let rep = Reputation {
        score: 0.75,
        feedback_count: 12,
    };
    assert!(!agent.collaborator_due(t0().plus_millis(59_999)));
    assert_eq!(agent.refresh_collaborator(t0().plus_millis(59_999), rep).unwrap(), None);
    let at = t0().plus_millis(60_000);
    assert_eq!(agent.refresh_collaborator(at, rep).unwrap(), Some(at));
    assert_eq!(text(&agent, Slot::Collaborator, "reputationDetail/score"), "0.75");
    assert_eq!(text(&agent, Slot::Collaborator, "reputationDetail/feedbackCount"), "12");
    assert_eq!(agent.refresh_collaborator(at.plus_millis(1000), rep).unwrap(), None);
    assert!(ProviderAgent::host(small_bundle())
        .unwrap()
        .refresh_collaborator(at, rep)
        .unwrap()
        .is_none());
}

#[test]
fn wire_api_over_loopback() {
    let clock = Arc::new(LogicalClock::new(t0()));
    let agent = Arc::new(ProviderAgent::host(full_bundle()).unwrap());
    let net = Arc::new(Loopback::new());
    let endpoint = "http://st.provider.local:8200";
    net.register(endpoint, Arc::new(ProviderHandler::new(agent.clone(), clock.clone())))
        .unwrap();
    let client = ProviderClient::new(net.clone());

    let wire = client.fetch(endpoint, Slot::NonFunctional).unwrap();
    assert_eq!(wire, agent.get_document(Slot::NonFunctional).unwrap());
    client.consume(endpoint, "c9").unwrap();
    assert_eq!(text(&agent, Slot::ConsumerBase, "consumer/id"), "c9");
    assert_eq!(
        client.fetch_url("http://st.provider.local:8200/desc/nonsense"),
        Err(ProviderError::Unexpected {
            status: 400,
            message: "unknown document kind \"nonsense\"".into()
        })
    );
    agent.set_online(false);
    assert_eq!(client.fetch(endpoint, Slot::Contextual), Err(ProviderError::Offline));
    assert_eq!(client.consume(endpoint, "c9"), Err(ProviderError::Offline));
    agent.set_online(true);

    let small = Arc::new(ProviderAgent::host(small_bundle()).unwrap());
    net.register("http://cpm.local", Arc::new(ProviderHandler::new(small, clock)))
        .unwrap();
    assert_eq!(
        client.fetch("http://cpm.local", Slot::HardwareDynamic),
        Err(ProviderError::NotHosted)
    );
    assert_eq!(client.consume("http://cpm.local", "c1"), Err(ProviderError::NotHosted));
    assert!(matches!(
        client.fetch("http://gone.local", Slot::Contextual),
        Err(ProviderError::Transport(_))
    ));
}

#[test]
fn loads_bundle_directories() {
    let dir = tempfile::tempdir().unwrap();
    let bundle = full_bundle();
    for (slot, doc) in &bundle.documents {
        std::fs::write(
            dir.path().join(format!("{slot}.xml")),
            codec::serialize(doc).unwrap().as_bytes(),
        )
        .unwrap();
    }
    let loaded = ServiceBundle::load_dir(dir.path()).unwrap();
    assert_eq!(loaded, bundle);
    assert!(ServiceBundle::load_dir(&dir.path().join("missing")).is_err());
}
