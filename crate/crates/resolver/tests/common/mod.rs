#![allow(dead_code)]

use std::collections::BTreeMap;
use std::sync::Arc;

use mobidesc_core::codec::serialize;
use mobidesc_core::model::{build_document, DocumentBuilder};
use mobidesc_core::wire::{Loopback, Metered};
use mobidesc_core::{
    DescriptionDocument, DocumentKind, Entry, ImportLink, LogicalClock, ServiceIdentity, Slot, Timestamp,
};
use mobidesc_provider::{ProviderAgent, ProviderClient, ProviderHandler, ServiceBundle};
use mobidesc_registry::{FindQuery, PublishRequest, Registry, RegistryHandler, ServiceSummary};
use mobidesc_resolver::Resolver;

pub const REGISTRY: &str = "http://registry.local:8100";
pub const PROVIDER: &str = "http://st.provider.local:8200";

pub fn t0() -> Timestamp {
    Timestamp::parse("2015-06-01T12:00:00.000Z").unwrap()
}

pub fn identity() -> ServiceIdentity {
    ServiceIdentity::new("SalesmanTracking", "urn:service:salesman-tracking")
}

fn doc(kind: DocumentKind, entries: Vec<Entry>) -> DescriptionDocument {
    build_document(kind, identity(), t0(), entries).unwrap()
}

pub fn functional(kinds: &[DocumentKind], endpoint: &str) -> DescriptionDocument {
    let mut b = DocumentBuilder::new(DocumentKind::Functional, identity());
    for kind in kinds {
        let slot = kind.provider_slot().unwrap();
        b = b.import(ImportLink::to_kind(*kind, ProviderClient::document_url(endpoint, slot)));
    }
    b.entry(Entry::group(
        "interface",
        [
            Entry::text("name", "Tracking"),
            Entry::group("operation", [Entry::text("name", "getLocation")]),
        ],
    ))
    .entry(Entry::group(
        "binding",
        [
            Entry::text("name", "TrackingHttp"),
            Entry::text("interface", "Tracking"),
            Entry::text("protocol", "HTTP"),
        ],
    ))
    .entry(Entry::group(
        "service",
        [
            Entry::text("name", "SalesmanTracking"),
            Entry::text("endpoint", format!("{endpoint}/invoke")),
        ],
    ))
    .build()
    .unwrap()
}

pub fn hardware() -> DescriptionDocument {
    doc(
        DocumentKind::Hardware,
        vec![
            Entry::group("sensorList", [Entry::group("sensor", [Entry::text("name", "GPS")])]),
            Entry::group("powerDetail", [Entry::text("batteryPercent", 90)]),
            Entry::group("manufacturerDetail", [Entry::text("manufacturer", "Acme")]),
        ],
    )
}

pub fn data_source() -> DescriptionDocument {
    doc(
        DocumentKind::DataSource,
        vec![Entry::group(
            "locationDetail",
            [
                Entry::group("gps", [Entry::text("latitude", 0), Entry::text("longitude", 0)]),
                Entry::text("location", "device GPS"),
            ],
        )],
    )
}

pub fn bundle() -> ServiceBundle {
    ServiceBundle::new(identity())
        .with(
            Slot::NonFunctional,
            doc(
                DocumentKind::NonFunctional,
                vec![Entry::group("serviceQoS", [Entry::text("availability", 0.95)])],
            ),
        )
        .with(
            Slot::Contextual,
            doc(
                DocumentKind::Contextual,
                vec![Entry::group("deviceContext", [Entry::text("batteryStatus", 90)])],
            ),
        )
        .with(
            Slot::Business,
            doc(
                DocumentKind::Business,
                vec![Entry::group(
                    "cost",
                    [Entry::group("price", [Entry::text("amount", 2)])],
                )],
            ),
        )
        .with(Slot::DataSourceDynamic, data_source().split().unwrap().1)
        .with(
            Slot::Collaborator,
            doc(DocumentKind::Collaborator, vec![Entry::text("updateFrequency", 60)]),
        )
        .with(Slot::HardwareDynamic, hardware().split().unwrap().1)
        .with(Slot::ConsumerBase, doc(DocumentKind::ConsumerBase, vec![]))
}

pub const LINKED: [DocumentKind; 6] = [
    DocumentKind::NonFunctional,
    DocumentKind::Contextual,
    DocumentKind::Business,
    DocumentKind::DataSource,
    DocumentKind::Collaborator,
    DocumentKind::Hardware,
];

pub struct World {
    pub clock: Arc<LogicalClock>,
    pub net: Arc<Metered<Loopback>>,
    pub registry: Arc<Registry>,
    pub agent: Arc<ProviderAgent>,
    pub resolver: Resolver,
    pub functional: DescriptionDocument,
}

impl World {
    pub fn with_functional(functional: DescriptionDocument) -> Self {
        let clock = Arc::new(LogicalClock::new(t0()));
        let net = Arc::new(Metered::new(Loopback::new()));
        let registry = Arc::new(Registry::new(clock.clone()));
        let agent = Arc::new(ProviderAgent::host(bundle()).unwrap());
        net.inner()
            .register(REGISTRY, Arc::new(RegistryHandler::new(registry.clone())))
            .unwrap();
        net.inner()
            .register(PROVIDER, Arc::new(ProviderHandler::new(agent.clone(), clock.clone())))
            .unwrap();
        registry
            .publish(PublishRequest {
                service_name: identity().name,
                service_uri: identity().uri,
                provider_endpoint: PROVIDER.into(),
                functional: serialize(&functional).unwrap(),
                static_docs: BTreeMap::from([
                    (
                        Slot::DataSourceStatic,
                        serialize(&data_source().split().unwrap().0).unwrap(),
                    ),
                    (Slot::HardwareStatic, serialize(&hardware().split().unwrap().0).unwrap()),
                ]),
            })
            .unwrap();
        let resolver = Resolver::new(REGISTRY, net.clone(), clock.clone());
        Self {
            clock,
            net,
            registry,
            agent,
            resolver,
            functional,
        }
    }

    pub fn new() -> Self {
        Self::with_functional(functional(&LINKED, PROVIDER))
    }

    pub fn summary(&self) -> ServiceSummary {
        self.resolver.find(&FindQuery::by_name("Salesman")).unwrap().remove(0)
    }
}
