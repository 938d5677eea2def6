use mobidesc_core::DocumentKind;
use mobidesc_sim::metrics::LagSummary;
use mobidesc_sim::{emit_metrics, run_scenario, Format, MetricsError, MetricsReport, ScenarioConfig, ScenarioError};

fn line(t: u64, battery: f64, network: &str) -> String {
    format!(
        r#"{{"t":{t},"batteryPercent":{battery},"charging":false,"networkType":"{network}","gps":{{"lat":45.07,"lon":7.68}},"freeMemoryMb":512,"userPresence":"available"}}"#
    )
}

fn config(json: &str) -> ScenarioConfig {
    ScenarioConfig::from_json(json).unwrap()
}

fn battery_then_resolve() -> ScenarioConfig {
    config(&format!(
        r#"{{
            "fixtures": ["SalesmanTracking"],
            "freshnessWindowMs": 60000,
            "traces": {{"SalesmanTracking": {{"inline": [{}, {}]}}}},
            "script": [
                {{"atMs": 2500, "action": "resolve", "service": "SalesmanTracking"}},
                {{"atMs": 4000, "action": "refresh", "service": "SalesmanTracking", "kinds": ["contextual"]}}
            ]
        }}"#,
        line(1000, 80.0, "WiFi"),
        line(1500, 80.0, "WiFi")
    ))
}

#[test]
fn lag_is_the_age_of_the_last_change() {
    let report = run_scenario(&battery_then_resolve()).unwrap();
    assert_eq!(report.violations, Vec::<String>::new());
    assert_eq!(report.events.ticks, 2);
    // The second tick changes nothing, so the contextual document keeps the
    // first tick's stamp.
    let lag = &report.freshness_lag[&DocumentKind::Contextual];
    assert_eq!(lag.samples_ms, vec![1500, 3000]);
    assert_eq!(report.actions.len(), 2);
    let (resolve, refresh) = (&report.actions[0], &report.actions[1]);
    assert_eq!((resolve.outcome.as_str(), refresh.outcome.as_str()), ("ok", "ok"));
    assert!(refresh.bytes < resolve.bytes);
    assert_eq!(refresh.requests, 1);
    assert_eq!(refresh.latency_ms, 20);
    assert_eq!(resolve.latency_ms, resolve.requests * 20);
}

#[test]
fn lag_summary_statistics() {
    let s = LagSummary::of(vec![40, 10, 30, 20]);
    assert_eq!((s.count, s.min_ms, s.max_ms, s.p50_ms, s.p95_ms), (4, 10, 40, 20, 40));
    assert_eq!(s.mean_ms, 25.0);
    assert_eq!(s.samples_ms, vec![40, 10, 30, 20]);
    let empty = LagSummary::of(Vec::new());
    assert_eq!((empty.count, empty.p95_ms), (0, 0));
}

#[test]
fn empty_script() {
    let report = run_scenario(&config(
        r#"{"fixtures":["MallLatestOffer","CarPoolingMate"],"freshnessWindowMs":1000}"#,
    ))
    .unwrap();
    assert!(report.actions.is_empty());
    assert_eq!(report.consistency_violations, 0);
    assert_eq!(report.services, ["MallLatestOffer", "CarPoolingMate"]);
}

fn busy() -> ScenarioConfig {
    let mut script = Vec::new();
    for i in 0..40u64 {
        let svc = ["SalesmanTracking", "MallLatestOffer", "CarPoolingMate"][(i % 3) as usize];
        script.push(format!(
            r#"{{"atMs":{},"action":"resolve","service":"{svc}"}}"#,
            1500 * i + 700
        ));
        script.push(format!(
            r#"{{"atMs":{},"action":"refresh","service":"{svc}","kinds":["contextual"]}}"#,
            1500 * i + 1200
        ));
    }
    script.push(
        r#"{"atMs":61000,"action":"select","criteria":{"hard":[],"soft":[
            {"kind":"contextual","path":"deviceContext/networkType","op":"==","bound":"WiFi","weight":2},
            {"kind":"contextual","path":"deviceContext/batteryStatus","op":">=","bound":50,"weight":1}],
            "freshnessWindow":30000}}"#
            .into(),
    );
    script.push(r#"{"atMs":61000,"action":"find","operation":"getLocation"}"#.into());
    config(&format!(
        r#"{{
            "fixtures": ["MallLatestOffer", "SalesmanTracking", "CarPoolingMate"],
            "freshnessWindowMs": 30000,
            "seed": 42,
            "durationMs": 62000,
            "traces": {{
                "MallLatestOffer": {{"randomWalk": {{"stepMs": 700}}}},
                "SalesmanTracking": {{"randomWalk": {{"stepMs": 250, "changeProbability": 0.5}}}},
                "CarPoolingMate": {{"randomWalk": {{"stepMs": 1000}}}}
            }},
            "randomChurn": {{"intervalMs": 3000, "offlineProbability": 0.25}},
            "script": [{}]
        }}"#,
        script.join(",")
    ))
}

#[test]
fn random_walks_and_churn_stay_consistent() {
    let report = run_scenario(&busy()).unwrap();
    assert_eq!(report.violations, Vec::<String>::new());
    assert!(report.events.ticks > 300);
    assert!(report.events.churn > 0);
    assert!(report
        .actions
        .iter()
        .any(|a| a.missing.iter().any(|m| m.ends_with(":Offline"))));
    assert!(report.actions.iter().all(|a| a.outcome == "ok"));
    assert_eq!(report.selections.len(), 1);
    assert!(report.freshness_lag.contains_key(&DocumentKind::Contextual));
}

#[test]
fn runs_are_reproducible() {
    let a = run_scenario(&busy()).unwrap().to_json();
    let b = run_scenario(&busy()).unwrap().to_json();
    assert_eq!(a, b);
    let mut other = busy();
    other.seed = 43;
    assert_ne!(run_scenario(&other).unwrap().to_json(), a);
}

#[test]
fn offline_provider_is_reported() {
    let report = run_scenario(&config(
        r#"{"fixtures":["SalesmanTracking"],"freshnessWindowMs":60000,
            "churn":[{"atMs":100,"provider":"SalesmanTracking","online":false},
                     {"atMs":300,"provider":"SalesmanTracking","online":true}],
            "script":[{"atMs":200,"action":"resolve","service":"SalesmanTracking"},
                      {"atMs":400,"action":"refresh","service":"SalesmanTracking","kinds":["contextual","hardware"]},
                      {"atMs":500,"action":"resolve","service":"Nobody"},
                      {"atMs":500,"action":"refresh","service":"Nobody","kinds":["contextual"]}]}"#,
    ))
    .unwrap();
    assert_eq!(report.violations, Vec::<String>::new());
    let a = &report.actions;
    assert!(
        a[0].missing.contains(&"contextual:Offline".to_string()),
        "{:?}",
        a[0].missing
    );
    // Only the refreshed kinds come back; the rest keep their earlier status.
    assert!(a[1].missing.contains(&"business:Offline".to_string()));
    assert!(!a[1]
        .missing
        .iter()
        .any(|m| m.starts_with("contextual") || m.starts_with("hardware")));
    assert_eq!(a[2].outcome, "notFound");
    assert_eq!(a[3].outcome, "notResolved");
}

#[test]
fn emitted_reports() {
    let report = run_scenario(&battery_then_resolve()).unwrap();
    let dir = tempfile::tempdir().unwrap();
    let json = dir.path().join("m.json");
    emit_metrics(&report, &json, Format::Json).unwrap();
    let text = std::fs::read_to_string(&json).unwrap();
    assert!(text.ends_with("}\n"));
    assert_eq!(MetricsReport::from_json(&text).unwrap(), report);

    let csv = dir.path().join("m.csv");
    emit_metrics(&report, &csv, Format::Csv).unwrap();
    let mut reader = csv::Reader::from_path(&csv).unwrap();
    assert_eq!(reader.headers().unwrap().get(0), Some("index"));
    assert_eq!(reader.records().count(), report.actions.len());

    let bad = dir.path().join("missing/dir/m.json");
    assert!(matches!(
        emit_metrics(&report, &bad, Format::Json),
        Err(MetricsError::Io { .. })
    ));
}

#[test]
fn config_errors() {
    let err = |json: &str| match run_scenario(&config(json)) {
        Err(ScenarioError::Config(msg)) => msg,
        other => panic!("expected a config error, got {other:?}"),
    };
    assert!(err(r#"{"fixtures":["SalesmanTracking","ST"],"freshnessWindowMs":1}"#).contains("twice"));
    assert!(
        err(r#"{"fixtures":["ST"],"freshnessWindowMs":1,"traces":{"X":{"randomWalk":{"stepMs":5}}}}"#)
            .contains("unknown")
    );
    assert!(err(
        r#"{"fixtures":["ST"],"freshnessWindowMs":1,"traces":{"SalesmanTracking":{"randomWalk":{"stepMs":0}}}}"#
    )
    .contains("stepMs"));
    assert!(err(r#"{"fixtures":["ST"],"freshnessWindowMs":1,"script":[
        {"atMs":5,"action":"find"},{"atMs":4,"action":"find"}]}"#)
    .contains("decrease"));
    assert!(err(r#"{"fixtures":["ST"],"freshnessWindowMs":1,"script":[
        {"atMs":5,"action":"refresh","service":"SalesmanTracking","kinds":["functional"]}]}"#)
    .contains("functional"));
    assert!(
        err(r#"{"fixtures":["ST"],"freshnessWindowMs":1,"traces":{"SalesmanTracking":{"inline":[{"t":1}]}}}"#)
            .contains("trace")
    );
    assert!(matches!(
        ScenarioConfig::from_json(r#"{"freshnessWindowMs":1,"bogus":1}"#),
        Err(ScenarioError::Config(_))
    ));
    assert!(matches!(
        run_scenario(&config(r#"{"fixtures":["NoSuchFixture"],"freshnessWindowMs":1}"#)),
        Err(ScenarioError::Fixture(_))
    ));
}
