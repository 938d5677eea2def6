//! Core types for partitioned, dynamically updated mobile service descriptions.

pub mod codec;
pub mod kind;
pub mod model;
#[cfg(feature = "testing")]
pub mod testing;
pub mod time;
pub mod wire;

pub use kind::{DocumentKind, Half, Location, Slot};
pub use model::{DescriptionDocument, ElementNode, ElementPath, Entry, ImportLink, ServiceIdentity};
pub use time::{Clock, LogicalClock, SystemClock, Timestamp};
