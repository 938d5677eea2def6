//! Description kinds and the slots they occupy between registry and provider.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

/// The seven linked descriptions plus the consumer base.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum DocumentKind {
    Functional,
    NonFunctional,
    Contextual,
    Business,
    DataSource,
    Collaborator,
    Hardware,
    ConsumerBase,
}

impl DocumentKind {
    pub const ALL: [DocumentKind; 8] = [
        DocumentKind::Functional,
        DocumentKind::NonFunctional,
        DocumentKind::Contextual,
        DocumentKind::Business,
        DocumentKind::DataSource,
        DocumentKind::Collaborator,
        DocumentKind::Hardware,
        DocumentKind::ConsumerBase,
    ];

    /// Short name used in namespaces, URLs and file names.
    pub fn as_str(self) -> &'static str {
        match self {
            Self::Functional => "functional",
            Self::NonFunctional => "nonFunctional",
            Self::Contextual => "contextual",
            Self::Business => "business",
            Self::DataSource => "dataSource",
            Self::Collaborator => "collaborator",
            Self::Hardware => "hardware",
            Self::ConsumerBase => "consumerBase",
        }
    }

    pub fn root_element(self) -> &'static str {
        match self {
            Self::Functional => "functionalDescription",
            Self::NonFunctional => "nonFunctionalDescription",
            Self::Contextual => "contextualDescription",
            Self::Business => "businessDescription",
            Self::DataSource => "dataSourceDescription",
            Self::Collaborator => "collaboratorDescription",
            Self::Hardware => "hardwareDescription",
            Self::ConsumerBase => "consumerBase",
        }
    }

    pub fn from_root_element(name: &str) -> Option<Self> {
        Self::ALL.into_iter().find(|k| k.root_element() == name)
    }

    pub fn namespace(self) -> String {
        format!("urn:mobidesc:{}", self.as_str())
    }

    pub fn from_namespace(ns: &str) -> Option<Self> {
        let short = ns.strip_prefix("urn:mobidesc:")?;
        short.parse().ok()
    }

    /// Whether documents of this kind carry a `timeStamp`.
    pub fn is_timestamped(self) -> bool {
        self != Self::Functional
    }

    /// Kinds split into a registry-held static half and a provider-held dynamic half.
    pub fn is_split(self) -> bool {
        matches!(self, Self::DataSource | Self::Hardware)
    }

    /// The slot the provider serves for this kind, if any.
    pub fn provider_slot(self) -> Option<Slot> {
        match self {
            Self::Functional => None,
            Self::NonFunctional => Some(Slot::NonFunctional),
            Self::Contextual => Some(Slot::Contextual),
            Self::Business => Some(Slot::Business),
            Self::DataSource => Some(Slot::DataSourceDynamic),
            Self::Collaborator => Some(Slot::Collaborator),
            Self::Hardware => Some(Slot::HardwareDynamic),
            Self::ConsumerBase => Some(Slot::ConsumerBase),
        }
    }

    pub fn registry_slot(self) -> Option<Slot> {
        match self {
            Self::Functional => Some(Slot::Functional),
            Self::DataSource => Some(Slot::DataSourceStatic),
            Self::Hardware => Some(Slot::HardwareStatic),
            _ => None,
        }
    }
}

impl fmt::Display for DocumentKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for DocumentKind {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| UnknownName(s.to_string()))
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown name {0:?}")]
pub struct UnknownName(pub String);

/// Which half of a split document a slot holds.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Half {
    Whole,
    Static,
    Dynamic,
}

/// Where a slot lives.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum Location {
    Registry,
    Provider,
}

/// A storable unit: a whole document, or one half of a split document.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub enum Slot {
    #[serde(rename = "functional")]
    Functional,
    #[serde(rename = "nonFunctional")]
    NonFunctional,
    #[serde(rename = "contextual")]
    Contextual,
    #[serde(rename = "business")]
    Business,
    #[serde(rename = "dataSource-static")]
    DataSourceStatic,
    #[serde(rename = "dataSource-dynamic")]
    DataSourceDynamic,
    #[serde(rename = "collaborator")]
    Collaborator,
    #[serde(rename = "hardware-static")]
    HardwareStatic,
    #[serde(rename = "hardware-dynamic")]
    HardwareDynamic,
    #[serde(rename = "consumerBase")]
    ConsumerBase,
}

impl Slot {
    pub const ALL: [Slot; 10] = [
        Slot::Functional,
        Slot::NonFunctional,
        Slot::Contextual,
        Slot::Business,
        Slot::DataSourceStatic,
        Slot::DataSourceDynamic,
        Slot::Collaborator,
        Slot::HardwareStatic,
        Slot::HardwareDynamic,
        Slot::ConsumerBase,
    ];

    pub fn kind(self) -> DocumentKind {
        match self {
            Self::Functional => DocumentKind::Functional,
            Self::NonFunctional => DocumentKind::NonFunctional,
            Self::Contextual => DocumentKind::Contextual,
            Self::Business => DocumentKind::Business,
            Self::DataSourceStatic | Self::DataSourceDynamic => DocumentKind::DataSource,
            Self::Collaborator => DocumentKind::Collaborator,
            Self::HardwareStatic | Self::HardwareDynamic => DocumentKind::Hardware,
            Self::ConsumerBase => DocumentKind::ConsumerBase,
        }
    }

    pub fn half(self) -> Half {
        match self {
            Self::DataSourceStatic | Self::HardwareStatic => Half::Static,
            Self::DataSourceDynamic | Self::HardwareDynamic => Half::Dynamic,
            _ => Half::Whole,
        }
    }

    pub fn location(self) -> Location {
        match self {
            Self::Functional | Self::DataSourceStatic | Self::HardwareStatic => Location::Registry,
            _ => Location::Provider,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Self::Functional => "functional",
            Self::NonFunctional => "nonFunctional",
            Self::Contextual => "contextual",
            Self::Business => "business",
            Self::DataSourceStatic => "dataSource-static",
            Self::DataSourceDynamic => "dataSource-dynamic",
            Self::Collaborator => "collaborator",
            Self::HardwareStatic => "hardware-static",
            Self::HardwareDynamic => "hardware-dynamic",
            Self::ConsumerBase => "consumerBase",
        }
    }
}

impl fmt::Display for Slot {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Slot {
    type Err = UnknownName;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::ALL
            .into_iter()
            .find(|k| k.as_str() == s)
            .ok_or_else(|| UnknownName(s.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn names_round_trip() {
        for k in DocumentKind::ALL {
            assert_eq!(k.as_str().parse::<DocumentKind>().unwrap(), k);
            assert_eq!(DocumentKind::from_root_element(k.root_element()), Some(k));
            assert_eq!(DocumentKind::from_namespace(&k.namespace()), Some(k));
        }
        for s in Slot::ALL {
            assert_eq!(s.as_str().parse::<Slot>().unwrap(), s);
        }
    }

    #[test]
    fn placement() {
        let registry: Vec<_> = Slot::ALL
            .into_iter()
            .filter(|s| s.location() == Location::Registry)
            .collect();
        assert_eq!(
            registry,
            [Slot::Functional, Slot::DataSourceStatic, Slot::HardwareStatic]
        );
        for k in DocumentKind::ALL {
            if let Some(s) = k.provider_slot() {
                assert_eq!(s.location(), Location::Provider);
                assert_eq!(s.kind(), k);
            }
        }
    }
}
