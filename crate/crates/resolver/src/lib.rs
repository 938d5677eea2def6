//! Consumer side: three-step description retrieval, staleness evaluation
//! and multi-aspect selection.

mod merge;
mod resolve;
pub mod select;
#[cfg(feature = "testing")]
pub mod testing;

pub use merge::{merge_split, MergeError};
pub use resolve::{
    staleness, AgeEntry, ClockSkew, MissingReason, ResolveError, ResolvedDescription, ResolvedDocument, Resolver,
    Source, StalenessReport,
};
pub use select::{select, Bound, Comparator, CriteriaError, Predicate, Preference, Ranked, SelectionCriteria};
