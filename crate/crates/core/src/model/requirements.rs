//! Requirement coverage of description placeholders per class of mobile service.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::document::DescriptionDocument;
use crate::kind::{DocumentKind, UnknownName};

/// Position on the human-automation continuum.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum ServiceClass {
    Automated,
    SemiAutomated,
    Manual,
}

impl ServiceClass {
    pub const ALL: [ServiceClass; 3] = [
        ServiceClass::SemiAutomated,
        ServiceClass::Automated,
        ServiceClass::Manual,
    ];
}

impl FromStr for ServiceClass {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "Automated" => Ok(Self::Automated),
            "SemiAutomated" => Ok(Self::SemiAutomated),
            "Manual" => Ok(Self::Manual),
            _ => Err(UnknownName(s.to_string())),
        }
    }
}

macro_rules! placeholders {
    ($($variant:ident => $kind:ident, $label:literal, $element:literal;)*) => {
        /// A row of the coverage matrix.
        #[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
        pub enum Placeholder { $($variant,)* }

        impl Placeholder {
            pub const ALL: &'static [Placeholder] = &[$(Placeholder::$variant,)*];

            pub fn kind(self) -> DocumentKind {
                match self { $(Placeholder::$variant => DocumentKind::$kind,)* }
            }

            /// Row label as printed in the coverage table.
            pub fn label(self) -> &'static str {
                match self { $(Placeholder::$variant => $label,)* }
            }

            /// Top-level element realising the row; empty for the import row.
            pub fn element(self) -> &'static str {
                match self { $(Placeholder::$variant => $element,)* }
            }
        }
    };
}

placeholders! {
    Include => Functional, "Include", "";
    Types => Functional, "Types", "types";
    Interface => Functional, "Interface", "interface";
    Binding => Functional, "Binding", "binding";
    Service => Functional, "Service", "service";
    ServiceQos => NonFunctional, "ServiceQoS", "serviceQoS";
    NetworkQos => NonFunctional, "NetworkQoS", "networkQoS";
    SystemQos => NonFunctional, "SystemQoS", "systemQoS";
    OtherQos => NonFunctional, "OtherQoS", "otherQoS";
    Legality => Business, "Legality", "legality";
    Certification => Business, "Certification", "certification";
    UsageRequirement => Business, "UsageRequirement", "usageRequirement";
    Cost => Business, "Cost/Price", "cost";
    DeviceContext => Contextual, "DeviceContext", "deviceContext";
    UserContext => Contextual, "UserContext", "userContext";
    ServiceContext => Contextual, "ServiceContext", "serviceContext";
    BusinessContext => Contextual, "BusinessContext", "businessContext";
    LocationDetail => DataSource, "LocationDetail", "locationDetail";
    CapacityDetail => DataSource, "CapacityDetail", "capacityDetail";
    QosDetail => DataSource, "QoSDetail", "qosDetail";
    ContextualDetail => DataSource, "ContextualDetail", "contextualDetail";
    FunctionalDetail => Collaborator, "FunctionalDetail", "functionalDetail";
    BusinessDetail => Collaborator, "BusinessDetail", "businessDetail";
    ReputationDetail => Collaborator, "ReputationDetail", "reputationDetail";
    UpdateFrequency => Collaborator, "UpdateFrequency", "updateFrequency";
    SensorList => Hardware, "SensorList", "sensorList";
    MemoryDetail => Hardware, "MemoryDetail", "memoryDetail";
    PowerDetail => Hardware, "PowerDetail", "powerDetail";
    ManufacturerDetail => Hardware, "ManufacturerDetail", "manufacturerDetail";
}

impl Placeholder {
    /// Whether a document realises this row: the import row needs at least
    /// one import, every other row a non-empty top-level element.
    pub fn is_present_in(self, doc: &DescriptionDocument) -> bool {
        if doc.kind() != self.kind() {
            return false;
        }
        match self {
            Placeholder::Include => !doc.imports().is_empty(),
            _ => doc
                .root()
                .children()
                .iter()
                .any(|c| c.name == self.element() && c.has_content()),
        }
    }
}

impl fmt::Display for Placeholder {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

/// Placeholder → required, in table order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct RequirementMatrix {
    pub rows: Vec<(Placeholder, bool)>,
}

impl RequirementMatrix {
    pub fn required(&self, p: Placeholder) -> bool {
        self.rows.iter().any(|(q, r)| *q == p && *r)
    }

    pub fn as_map(&self) -> BTreeMap<Placeholder, bool> {
        self.rows.iter().copied().collect()
    }
}

// Rows the exemplar services do not need: MallLatestOffer (semi-automated)
// and CarPoolingMate (manual). SalesmanTracking (automated) needs them all.
const SEMI_AUTOMATED_OMITS: &[Placeholder] = &[Placeholder::Legality, Placeholder::SensorList];
const MANUAL_OMITS: &[Placeholder] = &[
    Placeholder::OtherQos,
    Placeholder::Certification,
    Placeholder::LocationDetail,
    Placeholder::CapacityDetail,
    Placeholder::QosDetail,
    Placeholder::ContextualDetail,
    Placeholder::FunctionalDetail,
    Placeholder::BusinessDetail,
    Placeholder::ReputationDetail,
    Placeholder::UpdateFrequency,
    Placeholder::SensorList,
];

/// Which placeholders a service of the given class requires.
pub fn requirement_profile(class: ServiceClass) -> RequirementMatrix {
    let omitted: &[Placeholder] = match class {
        ServiceClass::Automated => &[],
        ServiceClass::SemiAutomated => SEMI_AUTOMATED_OMITS,
        ServiceClass::Manual => MANUAL_OMITS,
    };
    RequirementMatrix {
        rows: Placeholder::ALL.iter().map(|p| (*p, !omitted.contains(p))).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn automated_requires_everything() {
        let m = requirement_profile(ServiceClass::Automated);
        assert_eq!(m.rows.len(), 29);
        assert!(m.rows.iter().all(|(_, r)| *r));
    }

    #[test]
    fn manual_column() {
        let m = requirement_profile(ServiceClass::Manual);
        for p in Placeholder::ALL {
            if matches!(p.kind(), DocumentKind::DataSource | DocumentKind::Collaborator) {
                assert!(!m.required(*p), "{p}");
            }
        }
        assert!(!m.required(Placeholder::SensorList));
        assert!(m.required(Placeholder::Legality));
        assert_eq!(m.rows.iter().filter(|(_, r)| *r).count(), 18);
    }

    #[test]
    fn semi_automated_column() {
        let m = requirement_profile(ServiceClass::SemiAutomated);
        assert!(!m.required(Placeholder::Legality));
        assert!(m.required(Placeholder::Certification));
        assert!(!m.required(Placeholder::SensorList));
        assert!(m.required(Placeholder::OtherQos));
    }

    #[test]
    fn automated_dominates() {
        let auto = requirement_profile(ServiceClass::Automated).as_map();
        for class in [ServiceClass::SemiAutomated, ServiceClass::Manual] {
            for (p, r) in requirement_profile(class).rows {
                assert!(!r || auto[&p], "{p} required by {class:?} but not Automated");
            }
        }
    }

    #[test]
    fn four_rows_per_description_except_functional() {
        for kind in DocumentKind::ALL {
            let n = Placeholder::ALL.iter().filter(|p| p.kind() == kind).count();
            let expected = match kind {
                DocumentKind::Functional => 5,
                DocumentKind::ConsumerBase => 0,
                _ => 4,
            };
            assert_eq!(n, expected, "{kind}");
        }
    }
}
