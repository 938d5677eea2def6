//! Service registry for partitioned mobile service descriptions.
//!
//! Holds each service's functional description plus the static halves of its
//! split documents, and points callers at the provider for everything else.

mod api;
pub mod journal;
mod store;

pub use api::{ClientError, ErrorBody, PublishBody, Published, RegistryClient, RegistryHandler};
pub use store::{FindQuery, PublishRequest, Registry, RegistryError, ServiceRecord, ServiceSummary};
