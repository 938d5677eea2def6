mod common;

use std::sync::Arc;

use common::{full_bundle, small_bundle, t0};
use mobidesc_provider::testing::{check_walk, race_readers};
use mobidesc_provider::{ProviderAgent, RandomWalk};
use proptest::prelude::*;

fn walk(seed: u64, ticks: usize, p: f64, full: bool) -> Result<(), String> {
    let agent = ProviderAgent::host(if full { full_bundle() } else { small_bundle() }).unwrap();
    let stats = check_walk(
        &agent,
        RandomWalk::new(seed, t0(), 250).with_change_probability(p).take(ticks),
    )?;
    assert_eq!(stats.ticks, ticks);
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn ticks_are_minimal_and_monotone(seed in any::<u64>(), p in 0.0f64..0.6, full in any::<bool>()) {
        walk(seed, 60, p, full).map_err(TestCaseError::fail)?;
    }
}

#[test]
fn long_walk_against_the_oracle() {
    walk(0x5eed, 10_000, 0.2, true).unwrap();
}

#[test]
fn readers_never_see_torn_documents() {
    let agent = Arc::new(ProviderAgent::host(full_bundle()).unwrap());
    let stats = race_readers(agent, t0(), 100, 1000).unwrap();
    assert_eq!(stats.violations, 0);
    assert!(stats.reads >= 100);
}
