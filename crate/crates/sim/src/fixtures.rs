//! The three exemplar services: MallLatestOffer (semi-automated),
//! SalesmanTracking (automated) and CarPoolingMate (manual).
//!
//! [`build_fixture`] is the source of truth; the checked-in directories under
//! `fixtures/` are its canonical serialization and are what [`load_fixture`]
//! reads. All element values are synthetic.

use std::collections::BTreeMap;
use std::fmt;
use std::path::Path;
use std::str::FromStr;

use mobidesc_core::codec::{self, WireDocument};
use mobidesc_core::model::ServiceClass;
use mobidesc_core::model::{DocumentBuilder, NodeValue};
use mobidesc_core::{DescriptionDocument, DocumentKind, Entry, ImportLink, Location, ServiceIdentity, Slot, Timestamp};
use mobidesc_provider::{ProviderClient, ServiceBundle};
use mobidesc_registry::PublishRequest;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum FixtureName {
    MallLatestOffer,
    SalesmanTracking,
    CarPoolingMate,
}

impl FixtureName {
    /// Column order of the coverage table.
    pub const ALL: [FixtureName; 3] = [
        FixtureName::MallLatestOffer,
        FixtureName::SalesmanTracking,
        FixtureName::CarPoolingMate,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            FixtureName::MallLatestOffer => "MallLatestOffer",
            FixtureName::SalesmanTracking => "SalesmanTracking",
            FixtureName::CarPoolingMate => "CarPoolingMate",
        }
    }

    pub fn abbreviation(self) -> &'static str {
        match self {
            FixtureName::MallLatestOffer => "MLO",
            FixtureName::SalesmanTracking => "ST",
            FixtureName::CarPoolingMate => "CPM",
        }
    }

    pub fn class(self) -> ServiceClass {
        match self {
            FixtureName::MallLatestOffer => ServiceClass::SemiAutomated,
            FixtureName::SalesmanTracking => ServiceClass::Automated,
            FixtureName::CarPoolingMate => ServiceClass::Manual,
        }
    }

    /// Endpoint written into the canonical fixture files.
    pub fn default_endpoint(self) -> &'static str {
        match self {
            FixtureName::MallLatestOffer => "http://mlo.provider.local:8201",
            FixtureName::SalesmanTracking => "http://st.provider.local:8202",
            FixtureName::CarPoolingMate => "http://cpm.provider.local:8203",
        }
    }
}

impl fmt::Display for FixtureName {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

#[derive(Debug, thiserror::Error)]
pub enum FixtureError {
    #[error("unknown fixture {0:?} (expected MallLatestOffer, SalesmanTracking or CarPoolingMate)")]
    UnknownFixture(String),
    #[error("{path}: {reason}")]
    Invalid { path: String, reason: String },
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

impl FromStr for FixtureName {
    type Err = FixtureError;

    /// Accepts the full name or its abbreviation, case-insensitively.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        FixtureName::ALL
            .into_iter()
            .find(|n| n.as_str().eq_ignore_ascii_case(s) || n.abbreviation().eq_ignore_ascii_case(s))
            .ok_or_else(|| FixtureError::UnknownFixture(s.to_string()))
    }
}

/// Everything one service publishes: the registry record (functional
/// description plus static halves) and the provider-resident bundle.
#[derive(Debug, Clone, PartialEq)]
pub struct Fixture {
    pub service: ServiceIdentity,
    pub provider_endpoint: String,
    pub functional: DescriptionDocument,
    pub static_docs: BTreeMap<Slot, DescriptionDocument>,
    pub bundle: ServiceBundle,
}

/// Instant every fixture document is stamped with.
pub fn fixture_epoch() -> Timestamp {
    Timestamp::parse("2015-06-01T09:00:00.000Z").expect("literal")
}

const NOTE: &str = "Synthetic example values.";

fn origin(url: &str) -> Option<String> {
    let rest = url.split_once("://")?;
    let host = rest.1.split('/').next()?;
    (!host.is_empty()).then(|| format!("{}://{host}", rest.0))
}

impl Fixture {
    /// All documents keyed by slot.
    pub fn documents(&self) -> BTreeMap<Slot, &DescriptionDocument> {
        let mut out: BTreeMap<Slot, &DescriptionDocument> = BTreeMap::new();
        out.insert(Slot::Functional, &self.functional);
        out.extend(self.static_docs.iter().map(|(s, d)| (*s, d)));
        out.extend(self.bundle.documents.iter().map(|(s, d)| (*s, d)));
        out
    }

    pub fn publish_request(&self) -> Result<PublishRequest, codec::CodecError> {
        let mut static_docs = BTreeMap::new();
        for (slot, doc) in &self.static_docs {
            static_docs.insert(*slot, codec::serialize(doc)?);
        }
        Ok(PublishRequest {
            service_name: self.service.name.clone(),
            service_uri: self.service.uri.clone(),
            provider_endpoint: self.provider_endpoint.clone(),
            functional: codec::serialize(&self.functional)?,
            static_docs,
        })
    }

    /// The same service hosted at another endpoint: import locations and
    /// the service endpoint are rewritten.
    pub fn relocated(&self, endpoint: &str) -> Fixture {
        let endpoint = endpoint.trim_end_matches('/');
        let imports: Vec<ImportLink> = self
            .functional
            .imports()
            .iter()
            .map(|link| match link.target_kind().and_then(|k| k.provider_slot()) {
                Some(slot) => ImportLink {
                    location: ProviderClient::document_url(endpoint, slot),
                    ..link.clone()
                },
                None => link.clone(),
            })
            .collect();
        let mut root = self.functional.root().clone();
        if let Some(children) = root.children_mut() {
            for service in children.iter_mut().filter(|c| c.name == "service") {
                if let Some(fields) = service.children_mut() {
                    for f in fields.iter_mut().filter(|f| f.name == "endpoint") {
                        f.value = NodeValue::Text(format!("{endpoint}/invoke"));
                    }
                }
            }
        }
        let functional =
            DescriptionDocument::from_parts(DocumentKind::Functional, self.service.clone(), None, root, imports);
        Fixture {
            functional,
            provider_endpoint: endpoint.to_string(),
            ..self.clone()
        }
    }

    /// Writes every document as `<slot>.xml` in canonical form.
    pub fn write_dir(&self, dir: &Path) -> Result<(), FixtureError> {
        let io = |source| FixtureError::Io {
            path: dir.display().to_string(),
            source,
        };
        std::fs::create_dir_all(dir).map_err(io)?;
        for (slot, doc) in self.documents() {
            let path = dir.join(format!("{slot}.xml"));
            let wire = codec::serialize(doc).map_err(|e| FixtureError::Invalid {
                path: path.display().to_string(),
                reason: e.to_string(),
            })?;
            std::fs::write(&path, wire.as_bytes()).map_err(|source| FixtureError::Io {
                path: path.display().to_string(),
                source,
            })?;
        }
        Ok(())
    }

    /// Reads a bundle directory of `<slot>.xml` files. The provider endpoint
    /// is the origin of the functional description's service endpoint.
    pub fn from_dir(dir: &Path) -> Result<Fixture, FixtureError> {
        let wires = mobidesc_provider::read_dir(dir).map_err(|e| FixtureError::Invalid {
            path: dir.display().to_string(),
            reason: e.to_string(),
        })?;
        Fixture::from_wires(&dir.display().to_string(), wires)
    }

    pub fn from_wires(origin_name: &str, wires: BTreeMap<Slot, WireDocument>) -> Result<Fixture, FixtureError> {
        let invalid = |reason: String| FixtureError::Invalid {
            path: origin_name.to_string(),
            reason,
        };
        let mut docs = BTreeMap::new();
        for (slot, wire) in wires {
            let doc = codec::parse(&wire).map_err(|e| invalid(format!("{slot}.xml: {e}")))?;
            if doc.kind() != slot.kind() {
                return Err(invalid(format!("{slot}.xml holds a {} description", doc.kind())));
            }
            docs.insert(slot, doc);
        }
        let functional = docs
            .remove(&Slot::Functional)
            .ok_or_else(|| invalid("no functional.xml".into()))?;
        let service = functional.service().clone();
        let endpoint = functional
            .element_at("service/endpoint")
            .ok()
            .and_then(|n| n.as_text())
            .and_then(origin)
            .ok_or_else(|| invalid("functional description has no service endpoint".into()))?;
        let mut static_docs = BTreeMap::new();
        let mut bundle = ServiceBundle::new(service.clone());
        for (slot, doc) in docs {
            if doc.service() != &service {
                return Err(invalid(format!("{slot}.xml describes another service")));
            }
            match slot.location() {
                Location::Registry => {
                    static_docs.insert(slot, doc);
                }
                Location::Provider => {
                    bundle.documents.insert(slot, doc);
                }
            }
        }
        bundle.check().map_err(|e| invalid(e.to_string()))?;
        Ok(Fixture {
            service,
            provider_endpoint: endpoint,
            functional,
            static_docs,
            bundle,
        })
    }
}

fn t(name: &str, value: impl ToString) -> Entry {
    Entry::text(name, value)
}

fn g<const N: usize>(name: &str, children: [Entry; N]) -> Entry {
    Entry::group(name, children)
}

fn doc(kind: DocumentKind, service: &ServiceIdentity, entries: Vec<Entry>) -> DescriptionDocument {
    DocumentBuilder::new(kind, service.clone())
        .timestamp(fixture_epoch())
        .documentation(NOTE)
        .entries(entries)
        .build()
        .unwrap_or_else(|e| panic!("fixture {kind} for {} is invalid: {e}", service.name))
}

struct Operation {
    name: &'static str,
    input: &'static str,
    output: &'static str,
}

fn functional(
    service: &ServiceIdentity,
    endpoint: &str,
    kinds: &[DocumentKind],
    types: &[&str],
    interface: &str,
    operations: &[Operation],
) -> DescriptionDocument {
    let mut b = DocumentBuilder::new(DocumentKind::Functional, service.clone()).documentation(NOTE);
    for kind in kinds {
        let slot = kind.provider_slot().expect("linked kinds are provider-resident");
        b = b.import(ImportLink::to_kind(*kind, ProviderClient::document_url(endpoint, slot)));
    }
    let ops = operations.iter().map(|op| {
        g(
            "operation",
            [
                t("name", op.name),
                t("input", op.input),
                t("output", op.output),
                t("pattern", "in-out"),
            ],
        )
    });
    b.entry(Entry::group("types", types.iter().map(|ty| t("type", ty))))
        .entry(Entry::group(
            "interface",
            std::iter::once(t("name", interface)).chain(ops),
        ))
        .entry(g(
            "binding",
            [
                t("name", format!("{interface}HttpBinding")),
                t("interface", interface),
                t("protocol", "HTTP"),
                g("parameter", [t("name", "encoding"), t("value", "application/xml")]),
            ],
        ))
        .entry(g(
            "service",
            [
                t("name", service.name.as_str()),
                t("endpoint", format!("{endpoint}/invoke")),
            ],
        ))
        .build()
        .unwrap_or_else(|e| panic!("fixture functional for {} is invalid: {e}", service.name))
}

fn identity(name: FixtureName) -> ServiceIdentity {
    ServiceIdentity::new(name.as_str(), format!("urn:mobidesc:service:{}", name.as_str()))
}

fn service_qos(availability: f64, latency: u32, throughput: u32) -> Entry {
    g(
        "serviceQoS",
        [
            t("availability", availability),
            t("capacity", 50),
            t("latency", latency),
            t("throughput", throughput),
            t("performance", 7.5),
            t("reliability", 0.97),
        ],
    )
}

fn network_qos(bandwidth: u32) -> Entry {
    g(
        "networkQoS",
        [
            t("packetLoss", 0.01),
            t("networkDelay", 45),
            t("delayVariation", 12),
            t("bandwidthCapability", bandwidth),
        ],
    )
}

fn system_qos() -> Entry {
    g(
        "systemQoS",
        [
            t("accessibility", 0.95),
            t("security", "medium"),
            t("usability", "high"),
            t("scalability", "low"),
            t("interoperability", "medium"),
            t("robustness", "medium"),
            t("extensibility", "low"),
        ],
    )
}

fn usage_requirement(key: &str, minimum: u32) -> Entry {
    g(
        "usageRequirement",
        [g("precondition", [t("key", key), t("minimum", minimum)])],
    )
}

fn cost(amount: f64, model: &str) -> Entry {
    g(
        "cost",
        [g(
            "price",
            [t("amount", amount), t("currency", "AUD"), t("chargingModel", model)],
        )],
    )
}

fn legality(text: &str) -> Entry {
    g(
        "legality",
        [g("condition", [t("jurisdiction", "AU-NSW"), t("text", text)])],
    )
}

fn certification(name: &str, issuer: &str) -> Entry {
    g(
        "certification",
        [g(
            "certificate",
            [
                t("name", name),
                t("issuer", issuer),
                t("expiry", "2016-12-31T00:00:00.000Z"),
            ],
        )],
    )
}

fn device_context(sensors: &[&str], battery: u32, network: &str) -> Entry {
    let mut children: Vec<Entry> = sensors.iter().map(|s| t("sensor", s)).collect();
    children.extend([
        t("batteryStatus", battery),
        t("charging", false),
        t("dataPlan", "4 GB monthly"),
        t("networkType", network),
    ]);
    Entry::group("deviceContext", children)
}

fn user_context(availability: &str, routine: &str, situation: &str, address: &str, lat: f64, lon: f64) -> Entry {
    g(
        "userContext",
        [
            t("availability", availability),
            t("routine", routine),
            t("background", "Sydney metropolitan area"),
            t("situation", situation),
            g(
                "location",
                [
                    t("address", address),
                    g("gps", [t("latitude", lat), t("longitude", lon)]),
                    t("timeZone", "Australia/Sydney"),
                ],
            ),
            t("presence", "available"),
        ],
    )
}

fn hardware(service: &ServiceIdentity, sensors: &[(&str, &str)], battery: u32, model: &str) -> DescriptionDocument {
    let mut entries = Vec::new();
    if !sensors.is_empty() {
        entries.push(Entry::group(
            "sensorList",
            sensors
                .iter()
                .map(|(name, what)| g("sensor", [t("name", name), t("functionality", what)])),
        ));
    }
    entries.extend([
        g(
            "memoryDetail",
            [
                t("primaryMb", 512),
                t("secondaryMb", 8192),
                t("externalLocation", "/sdcard"),
            ],
        ),
        g(
            "powerDetail",
            [
                t("batteryPercent", battery),
                t("charging", false),
                t("estimatedRuntimeMinutes", battery * 6),
            ],
        ),
        g(
            "manufacturerDetail",
            [
                t("manufacturer", model),
                t("kernelVersion", "3.4.0"),
                t("processor", "quad-core 1.6 GHz"),
                t("adapter", "WiFi 802.11n"),
                t("adapter", "Bluetooth 4.0"),
            ],
        ),
    ]);
    doc(DocumentKind::Hardware, service, entries)
}

fn collaborator(
    service: &ServiceIdentity,
    references: &[&str],
    score: f64,
    feedback: u32,
    period_s: u32,
) -> DescriptionDocument {
    doc(
        DocumentKind::Collaborator,
        service,
        vec![
            Entry::group("functionalDetail", references.iter().map(|r| t("reference", r))),
            g("businessDetail", [cost(0.0, "free")]),
            g("reputationDetail", [t("score", score), t("feedbackCount", feedback)]),
            t("updateFrequency", period_s),
        ],
    )
}

/// Split a whole description between registry and provider.
fn place(
    whole: DescriptionDocument,
    static_docs: &mut BTreeMap<Slot, DescriptionDocument>,
    bundle: ServiceBundle,
) -> ServiceBundle {
    let kind = whole.kind();
    let (s, d) = whole.split().expect("split kinds split");
    let static_slot = Slot::ALL
        .into_iter()
        .find(|sl| sl.kind() == kind && sl.location() == Location::Registry)
        .expect("split kinds have a registry slot");
    static_docs.insert(static_slot, s);
    bundle.with(kind.provider_slot().expect("provider slot"), d)
}

fn salesman_tracking() -> Fixture {
    let name = FixtureName::SalesmanTracking;
    let service = identity(name);
    let endpoint = name.default_endpoint();
    let kinds = [
        DocumentKind::NonFunctional,
        DocumentKind::Contextual,
        DocumentKind::Business,
        DocumentKind::DataSource,
        DocumentKind::Collaborator,
        DocumentKind::Hardware,
    ];
    let functional = functional(
        &service,
        endpoint,
        &kinds,
        &["Position", "Route"],
        "SalesmanTracking",
        &[
            Operation {
                name: "getLocation",
                input: "SalesmanId",
                output: "Position",
            },
            Operation {
                name: "getRoute",
                input: "SalesmanId",
                output: "Route",
            },
        ],
    );
    let mut static_docs = BTreeMap::new();
    let bundle = ServiceBundle::new(service.clone())
        .with(
            Slot::NonFunctional,
            doc(
                DocumentKind::NonFunctional,
                &service,
                vec![
                    service_qos(0.98, 120, 20),
                    network_qos(54000),
                    system_qos(),
                    g("otherQoS", [t("privacy", "location shared with employer only")]),
                ],
            ),
        )
        .with(
            Slot::Contextual,
            doc(
                DocumentKind::Contextual,
                &service,
                vec![
                    device_context(&["GPS", "accelerometer"], 85, "WiFi"),
                    user_context(
                        "09:00-17:00 weekdays",
                        "client visits",
                        "driving",
                        "George St, Sydney",
                        -33.8688,
                        151.2093,
                    ),
                    g(
                        "serviceContext",
                        [
                            t("domain", "field sales"),
                            t("connectionPreference", "WiFi"),
                            t("specialisation", "tracking"),
                        ],
                    ),
                    g(
                        "businessContext",
                        [
                            t("preferredScenario", "sales territory planning"),
                            t("preferredPartner", "MapService"),
                        ],
                    ),
                ],
            ),
        )
        .with(
            Slot::Business,
            doc(
                DocumentKind::Business,
                &service,
                vec![
                    legality("Location is disclosed only to the employing organisation."),
                    certification("Workplace privacy compliance", "Example Certification Body"),
                    usage_requirement("employeeConsent", 1),
                    cost(0.05, "perCall"),
                ],
            ),
        )
        .with(Slot::ConsumerBase, {
            let at = fixture_epoch().plus_millis(-3_600_000).to_string();
            doc(
                DocumentKind::ConsumerBase,
                &service,
                vec![g(
                    "consumer",
                    [t("id", "manager-01"), t("invocationCount", 3), t("lastInvocation", at)],
                )],
            )
        })
        .with(
            Slot::Collaborator,
            collaborator(&service, &["http://maps.example.org/mapping?wsdl"], 0.92, 1200, 300),
        );
    let bundle = place(
        doc(
            DocumentKind::DataSource,
            &service,
            vec![
                g(
                    "locationDetail",
                    [
                        g("gps", [t("latitude", -33.8688), t("longitude", 151.2093)]),
                        t("location", "device GPS receiver"),
                    ],
                ),
                g(
                    "capacityDetail",
                    [
                        t("physicalCapacity", "1 fix per second"),
                        t("battery", 85),
                        t("computation", 120),
                    ],
                ),
                g(
                    "qosDetail",
                    [
                        t("availability", 0.99),
                        t("throughput", 1),
                        t("reliability", 0.95),
                        t("networkDelay", 0),
                        t("security", "high"),
                    ],
                ),
                g(
                    "contextualDetail",
                    [t("mapService", "MapService").dynamic(false), t("fixQuality", "3D")],
                ),
            ],
        ),
        &mut static_docs,
        bundle,
    );
    let bundle = place(
        hardware(
            &service,
            &[("GPS", "positioning"), ("accelerometer", "motion")],
            85,
            "Samsung",
        ),
        &mut static_docs,
        bundle,
    );
    Fixture {
        service,
        provider_endpoint: endpoint.into(),
        functional,
        static_docs,
        bundle,
    }
}

fn mall_latest_offer() -> Fixture {
    let name = FixtureName::MallLatestOffer;
    let service = identity(name);
    let endpoint = name.default_endpoint();
    let kinds = [
        DocumentKind::NonFunctional,
        DocumentKind::Contextual,
        DocumentKind::Business,
        DocumentKind::DataSource,
        DocumentKind::Collaborator,
        DocumentKind::Hardware,
    ];
    let functional = functional(
        &service,
        endpoint,
        &kinds,
        &["Offer", "OfferList"],
        "MallOffers",
        &[
            Operation {
                name: "getLatestOffers",
                input: "BrandFilter",
                output: "OfferList",
            },
            Operation {
                name: "postOffer",
                input: "Offer",
                output: "Acknowledgement",
            },
        ],
    );
    let mut static_docs = BTreeMap::new();
    let bundle = ServiceBundle::new(service.clone())
        .with(
            Slot::NonFunctional,
            doc(
                DocumentKind::NonFunctional,
                &service,
                vec![
                    service_qos(0.9, 300, 10),
                    network_qos(54000),
                    system_qos(),
                    g("otherQoS", [t("offerFreshness", "updated hourly")]),
                ],
            ),
        )
        .with(
            Slot::Contextual,
            doc(
                DocumentKind::Contextual,
                &service,
                vec![
                    device_context(&[], 70, "WiFi"),
                    user_context(
                        "10:00-21:00 daily",
                        "mall concierge shift",
                        "at desk",
                        "Pitt St Mall, Sydney",
                        -33.8701,
                        151.2086,
                    ),
                    g(
                        "serviceContext",
                        [
                            t("domain", "retail"),
                            t("connectionPreference", "WiFi"),
                            t("specialisation", "offers"),
                        ],
                    ),
                    g(
                        "businessContext",
                        [
                            t("preferredScenario", "in-mall shopping"),
                            t("composition", "BrandOfferAggregation"),
                        ],
                    ),
                ],
            ),
        )
        .with(
            Slot::Business,
            doc(
                DocumentKind::Business,
                &service,
                vec![
                    certification("Retail association member", "Example Retail Association"),
                    usage_requirement("insideMall", 1),
                    cost(0.0, "free"),
                ],
            ),
        )
        .with(Slot::ConsumerBase, doc(DocumentKind::ConsumerBase, &service, vec![]))
        .with(
            Slot::Collaborator,
            collaborator(
                &service,
                &[
                    "http://brand-a.example.com/offers?wsdl",
                    "http://brand-b.example.com/offers?wsdl",
                    "http://brand-c.example.com/offers?wsdl",
                ],
                0.81,
                340,
                60,
            ),
        );
    let bundle = place(
        doc(
            DocumentKind::DataSource,
            &service,
            vec![
                g(
                    "locationDetail",
                    [
                        g("gps", [t("latitude", -33.8701), t("longitude", 151.2086)]),
                        t("location", "mall information desk"),
                    ],
                ),
                g(
                    "capacityDetail",
                    [
                        t("physicalCapacity", "200 offers"),
                        t("battery", 70),
                        t("computation", 80),
                    ],
                ),
                g(
                    "qosDetail",
                    [t("availability", 0.9), t("reliability", 0.9), t("security", "medium")],
                ),
                g("contextualDetail", [t("footfall", "high")]),
            ],
        ),
        &mut static_docs,
        bundle,
    );
    let bundle = place(hardware(&service, &[], 70, "LG"), &mut static_docs, bundle);
    Fixture {
        service,
        provider_endpoint: endpoint.into(),
        functional,
        static_docs,
        bundle,
    }
}

fn car_pooling_mate() -> Fixture {
    let name = FixtureName::CarPoolingMate;
    let service = identity(name);
    let endpoint = name.default_endpoint();
    let kinds = [
        DocumentKind::NonFunctional,
        DocumentKind::Contextual,
        DocumentKind::Business,
        DocumentKind::Hardware,
    ];
    let functional = functional(
        &service,
        endpoint,
        &kinds,
        &["Ride", "RideRequest"],
        "CarPooling",
        &[
            Operation {
                name: "findPoolingMate",
                input: "RideRequest",
                output: "Ride",
            },
            Operation {
                name: "offerRide",
                input: "Ride",
                output: "Acknowledgement",
            },
        ],
    );
    let mut static_docs = BTreeMap::new();
    let bundle = ServiceBundle::new(service.clone())
        .with(
            Slot::NonFunctional,
            doc(
                DocumentKind::NonFunctional,
                &service,
                vec![service_qos(0.7, 60_000, 1), network_qos(384), system_qos()],
            ),
        )
        .with(
            Slot::Contextual,
            doc(
                DocumentKind::Contextual,
                &service,
                vec![
                    device_context(&[], 60, "GSM"),
                    user_context(
                        "evenings",
                        "commute",
                        "in a meeting",
                        "Parramatta, NSW",
                        -33.815,
                        151.0011,
                    ),
                    g(
                        "serviceContext",
                        [t("domain", "transport"), t("connectionPreference", "any")],
                    ),
                    g("businessContext", [t("preferredScenario", "shared commute")]),
                ],
            ),
        )
        .with(
            Slot::Business,
            doc(
                DocumentKind::Business,
                &service,
                vec![
                    legality("Drivers hold a valid licence and passenger insurance."),
                    usage_requirement("seats", 1),
                    cost(4.5, "perCall"),
                ],
            ),
        )
        .with(Slot::ConsumerBase, doc(DocumentKind::ConsumerBase, &service, vec![]));
    let bundle = place(hardware(&service, &[], 60, "Motorola"), &mut static_docs, bundle);
    Fixture {
        service,
        provider_endpoint: endpoint.into(),
        functional,
        static_docs,
        bundle,
    }
}

/// Builds a fixture from code at its default endpoint.
pub fn build_fixture(name: FixtureName) -> Fixture {
    match name {
        FixtureName::MallLatestOffer => mall_latest_offer(),
        FixtureName::SalesmanTracking => salesman_tracking(),
        FixtureName::CarPoolingMate => car_pooling_mate(),
    }
}

/// Loads a shipped fixture by name (or abbreviation) from its canonical files.
pub fn load_fixture(name: &str) -> Result<Fixture, FixtureError> {
    let name: FixtureName = name.parse()?;
    let wires = crate::embedded::files(name)
        .iter()
        .map(|(slot, text)| (*slot, WireDocument::from_bytes(text.as_bytes().to_vec())))
        .collect();
    Fixture::from_wires(name.as_str(), wires)
}
