use std::collections::BTreeMap;
use std::io;
use std::path::Path;

use mobidesc_core::codec::{self, WireDocument};
use mobidesc_core::{DescriptionDocument, Half, Location, ServiceIdentity, Slot};

/// The provider-resident documents of one service.
#[derive(Debug, Clone, PartialEq)]
pub struct ServiceBundle {
    pub service: ServiceIdentity,
    pub documents: BTreeMap<Slot, DescriptionDocument>,
}

#[derive(Debug, thiserror::Error)]
pub enum BundleError {
    #[error("invalid bundle: {0}")]
    Invalid(String),
    #[error("{path}: {source}")]
    Io { path: String, source: io::Error },
    #[error("{path}: {source}")]
    Codec { path: String, source: codec::CodecError },
}

impl ServiceBundle {
    pub fn new(service: ServiceIdentity) -> Self {
        Self {
            service,
            documents: BTreeMap::new(),
        }
    }

    pub fn with(mut self, slot: Slot, doc: DescriptionDocument) -> Self {
        self.documents.insert(slot, doc);
        self
    }

    /// Checks identities, placement and document validity.
    pub fn check(&self) -> Result<(), BundleError> {
        let bad = |m: String| Err(BundleError::Invalid(m));
        for (slot, doc) in &self.documents {
            if slot.location() != Location::Provider {
                return bad(format!("{slot} is not held by providers"));
            }
            if doc.kind() != slot.kind() {
                return bad(format!("{slot} holds a {} description", doc.kind()));
            }
            if doc.service() != &self.service {
                return bad(format!(
                    "{slot} describes {:?} ({}), bundle is {:?} ({})",
                    doc.service().name,
                    doc.service().uri,
                    self.service.name,
                    self.service.uri
                ));
            }
            let report = doc.validate();
            if !report.is_valid() {
                return bad(format!("{slot}: {report}"));
            }
            if slot.half() == Half::Dynamic && !doc.is_pure_half(true) {
                return bad(format!("{slot} contains static entries"));
            }
        }
        Ok(())
    }

    /// Loads the provider-resident `<slot>.xml` files of a bundle directory;
    /// other files are ignored. The identity is taken from the documents.
    pub fn load_dir(dir: &Path) -> Result<Self, BundleError> {
        let wires = read_dir(dir)?;
        let mut documents = BTreeMap::new();
        let mut service = None;
        for (slot, wire) in wires {
            let path = dir.join(format!("{slot}.xml")).display().to_string();
            let doc = codec::parse(&wire).map_err(|source| BundleError::Codec { path, source })?;
            service.get_or_insert_with(|| doc.service().clone());
            if slot.location() == Location::Provider {
                documents.insert(slot, doc);
            }
        }
        let service = service.ok_or_else(|| BundleError::Invalid(format!("{} holds no documents", dir.display())))?;
        let bundle = Self { service, documents };
        bundle.check()?;
        Ok(bundle)
    }
}

/// Reads every `<slot>.xml` file in `dir`, for all slots.
pub fn read_dir(dir: &Path) -> Result<BTreeMap<Slot, WireDocument>, BundleError> {
    let mut out = BTreeMap::new();
    for slot in Slot::ALL {
        let path = dir.join(format!("{slot}.xml"));
        match std::fs::read(&path) {
            Ok(bytes) => {
                out.insert(slot, WireDocument::from_bytes(bytes));
            }
            Err(e) if e.kind() == io::ErrorKind::NotFound => {}
            Err(source) => {
                return Err(BundleError::Io {
                    path: path.display().to_string(),
                    source,
                })
            }
        }
    }
    if out.is_empty() && !dir.is_dir() {
        return Err(BundleError::Io {
            path: dir.display().to_string(),
            source: io::Error::new(io::ErrorKind::NotFound, "not a directory"),
        });
    }
    Ok(out)
}
