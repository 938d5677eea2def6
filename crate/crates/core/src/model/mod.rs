//! In-memory description infoset: document kinds, placeholder schema,
//! validation and the requirement coverage matrix.

mod document;
mod functional;
mod node;
mod requirements;
pub mod schema;
mod validate;

pub use document::{
    build_document, BuildError, DescriptionDocument, DocumentBuilder, Entry, EntryValue, ImportLink, LookupError,
    ServiceIdentity,
};
pub use functional::{BindingDecl, FunctionalDescription, InterfaceDecl, OperationSig};
pub use node::{is_xml_name, is_xml_text, ElementNode, ElementPath, NodeValue, PathError, Segment};
pub use requirements::{requirement_profile, Placeholder, RequirementMatrix, ServiceClass};
pub use validate::{validate, ValidationReport, Violation};
