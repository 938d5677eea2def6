#![allow(dead_code)]

use mobidesc_core::model::build_document;
use mobidesc_core::{DescriptionDocument, DocumentKind, Entry, ServiceIdentity, Slot, Timestamp};
use mobidesc_provider::ServiceBundle;

pub fn t0() -> Timestamp {
    Timestamp::parse("2015-06-01T12:00:00.000Z").unwrap()
}

pub fn identity() -> ServiceIdentity {
    ServiceIdentity::new("SalesmanTracking", "urn:service:salesman-tracking")
}

fn doc(kind: DocumentKind, entries: Vec<Entry>) -> DescriptionDocument {
    build_document(kind, identity(), t0(), entries).unwrap()
}

/// Every provider-resident slot populated.
pub fn full_bundle() -> ServiceBundle {
    let hardware = doc(
        DocumentKind::Hardware,
        vec![
            Entry::group("sensorList", [Entry::group("sensor", [Entry::text("name", "GPS")])]),
            Entry::group(
                "powerDetail",
                [Entry::text("batteryPercent", 90), Entry::text("charging", false)],
            ),
            Entry::group("memoryDetail", [Entry::text("primaryMb", 256)]),
        ],
    );
    let data_source = doc(
        DocumentKind::DataSource,
        vec![
            Entry::group(
                "locationDetail",
                [
                    Entry::group("gps", [Entry::text("latitude", 0), Entry::text("longitude", 0)]),
                    Entry::text("location", "device GPS"),
                ],
            ),
            Entry::group(
                "qosDetail",
                [Entry::text("availability", 0.99), Entry::text("security", "high")],
            ),
        ],
    );
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
                    [Entry::group("price", [Entry::text("amount", 0)])],
                )],
            ),
        )
        .with(Slot::DataSourceDynamic, data_source.split().unwrap().1)
        .with(
            Slot::Collaborator,
            doc(
                DocumentKind::Collaborator,
                vec![
                    Entry::group("reputationDetail", [Entry::text("score", 0.5)]),
                    Entry::text("updateFrequency", 60),
                ],
            ),
        )
        .with(Slot::HardwareDynamic, hardware.split().unwrap().1)
        .with(Slot::ConsumerBase, doc(DocumentKind::ConsumerBase, vec![]))
}

/// A manual-style bundle: no data source, collaborator or hardware.
pub fn small_bundle() -> ServiceBundle {
    let mut b = full_bundle();
    for s in [
        Slot::DataSourceDynamic,
        Slot::Collaborator,
        Slot::HardwareDynamic,
        Slot::ConsumerBase,
    ] {
        b.documents.remove(&s);
    }
    b
}
