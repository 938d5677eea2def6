use std::time::Duration;

use mobidesc_resolver::testing::{oracle_select, random_instance, scaled, Instance};
use mobidesc_resolver::{select, Bound, Comparator, CriteriaError, Predicate, SelectionCriteria};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn run(instance: &Instance) -> Vec<(String, f64)> {
    select(&instance.candidates, &instance.criteria, instance.now)
        .into_iter()
        .map(|r| (r.summary.service_id, r.score))
        .collect()
}

/// Scores compared bit for bit, so a -0.0 cannot pass for 0.0.
fn bits(v: &[(String, f64)]) -> Vec<(String, u64)> {
    v.iter().map(|(id, s)| (id.clone(), s.to_bits())).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(500))]

    #[test]
    fn matches_brute_force(seed in any::<u64>()) {
        let instance = random_instance(&mut ChaCha8Rng::seed_from_u64(seed));
        prop_assert_eq!(bits(&run(&instance)), bits(&oracle_select(&instance)));
    }

    #[test]
    fn scaling_weights_keeps_ranking(seed in any::<u64>()) {
        let instance = random_instance(&mut ChaCha8Rng::seed_from_u64(seed));
        let base = run(&instance);
        let times7 = run(&scaled(&instance, 7.0));
        let ids = |v: &[(String, f64)]| v.iter().map(|(id, _)| id.clone()).collect::<Vec<_>>();
        prop_assert_eq!(ids(&base), ids(&times7));
        for ((_, a), (_, b)) in base.iter().zip(&times7) {
            prop_assert_eq!(a * 7.0, *b);
        }
    }
}

#[test]
fn instances_exercise_both_outcomes() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (mut some, mut none, mut ties) = (0, 0, 0);
    for _ in 0..500 {
        let ranked = oracle_select(&random_instance(&mut rng));
        if ranked.is_empty() {
            none += 1;
        } else {
            some += 1;
        }
        ties += ranked.windows(2).filter(|w| w[0].1 == w[1].1).count();
    }
    assert!(some > 100 && none > 20 && ties > 100, "{some} {none} {ties}");
}

#[test]
fn criteria_json() {
    let c = SelectionCriteria::from_json(
        r#"{"hard":[{"kind":"contextual","path":"deviceContext/batteryStatus","op":">=","bound":30}],
            "soft":[{"kind":"contextual","path":"deviceContext/networkType","op":"==","bound":"WiFi","weight":2.5}],
            "freshnessWindow":10000}"#,
    )
    .unwrap();
    assert_eq!(c.freshness_window, Duration::from_secs(10));
    assert_eq!(c.hard[0].op, Comparator::Ge);
    assert_eq!(c.hard[0].bound, Bound::Number(30.0));
    assert_eq!(c.soft[0].predicate.bound, Bound::Text("WiFi".into()));
    let back = serde_json::to_string(&c).unwrap();
    assert_eq!(SelectionCriteria::from_json(&back).unwrap(), c);

    let bad = r#"{"soft":[{"kind":"contextual","path":"a","op":"<","bound":1,"weight":0}],"freshnessWindow":1}"#;
    assert!(matches!(
        SelectionCriteria::from_json(bad),
        Err(CriteriaError::BadWeight { index: 0, .. })
    ));
    let bad = r#"{"soft":[{"kind":"contextual","path":"a","op":"<","bound":1,"weight":-2}],"freshnessWindow":1}"#;
    assert!(matches!(
        SelectionCriteria::from_json(bad),
        Err(CriteriaError::BadWeight { .. })
    ));
    assert!(matches!(SelectionCriteria::from_json("{"), Err(CriteriaError::Json(_))));
    let mut c = SelectionCriteria::new(Duration::ZERO);
    c.hard.push(Predicate {
        kind: mobidesc_core::DocumentKind::Contextual,
        path: "a".parse().unwrap(),
        op: Comparator::Lt,
        bound: Bound::Number(f64::NAN),
    });
    assert!(matches!(c.validate(), Err(CriteriaError::BadBound(_))));
}
