//! Case-study fixtures, requirement-coverage conformance and a deterministic
//! scenario runner wiring registry, providers and consumers together.

pub mod coverage;
mod embedded;
pub mod fixtures;
pub mod metrics;
pub mod scenario;

pub use coverage::{verify_coverage, ConformanceReport, RowCoverage};
pub use fixtures::{build_fixture, load_fixture, Fixture, FixtureError, FixtureName};
pub use metrics::{emit_metrics, Format, MetricsError, MetricsReport};
pub use scenario::{run_scenario, Action, ScenarioConfig, ScenarioError, ScriptStep, TraceSource};
