//! Simulated mobile service provider.
//!
//! Hosts the provider-resident description documents of one service, serves
//! them over the wire API and keeps them current through a watchdog that
//! turns sensed context changes into re-stamped documents.

mod agent;
mod api;
mod bundle;
pub mod mapping;
pub mod snapshot;
#[cfg(feature = "testing")]
pub mod testing;

pub use agent::{plan_updates, AgentError, HostedDocument, ProviderAgent, Reputation};
pub use api::{ConsumeBody, ProviderClient, ProviderError, ProviderHandler};
pub use bundle::{read_dir, BundleError, ServiceBundle};
pub use snapshot::{ContextSnapshot, GeoPoint, NetworkType, Presence, RandomWalk, Readings, SnapshotError};
