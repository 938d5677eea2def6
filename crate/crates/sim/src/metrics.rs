//! Scenario metrics and their JSON/CSV renderings.

use std::collections::BTreeMap;
use std::path::Path;

use mobidesc_core::wire::Traffic;
use mobidesc_core::DocumentKind;
use mobidesc_resolver::ResolvedDescription;
use serde::{Deserialize, Serialize};

use crate::scenario::ScenarioConfig;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ActionRecord {
    pub index: u64,
    pub at_ms: u64,
    pub action: String,
    pub service: Option<String>,
    /// Provider-resident kinds fetched.
    pub kinds: u64,
    pub requests: u64,
    pub request_bytes: u64,
    pub response_bytes: u64,
    pub bytes: u64,
    /// Simulated: two hops per request, issued one after another.
    pub latency_ms: u64,
    pub outcome: String,
    pub detail: Option<String>,
    /// `slot:reason` for every slot the consumer could not obtain.
    pub missing: Vec<String>,
}

impl ActionRecord {
    pub(crate) fn new(index: usize, at_ms: u64, action: &str) -> Self {
        Self {
            index: index as u64,
            at_ms,
            action: action.to_string(),
            service: None,
            kinds: 0,
            requests: 0,
            request_bytes: 0,
            response_bytes: 0,
            bytes: 0,
            latency_ms: 0,
            outcome: "ok".into(),
            detail: None,
            missing: Vec::new(),
        }
    }

    pub(crate) fn fail(&mut self, message: String) {
        self.outcome = "error".into();
        self.detail = Some(message);
    }

    pub(crate) fn note_missing(&mut self, resolved: &ResolvedDescription) {
        self.missing = resolved.missing.iter().map(|(s, r)| format!("{s}:{r:?}")).collect();
    }

    pub(crate) fn set_traffic(&mut self, t: Traffic, hop_latency_ms: u64) {
        self.requests = t.requests;
        self.request_bytes = t.request_bytes;
        self.response_bytes = t.response_bytes;
        self.bytes = t.bytes();
        self.latency_ms = t.requests * 2 * hop_latency_ms;
    }
}

/// Consumer-observed document ages, in milliseconds.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct LagSummary {
    pub count: u64,
    pub min_ms: u64,
    pub max_ms: u64,
    pub mean_ms: f64,
    pub p50_ms: u64,
    pub p95_ms: u64,
    /// In observation order.
    pub samples_ms: Vec<u64>,
}

impl LagSummary {
    pub fn of(samples: Vec<u64>) -> Self {
        let mut sorted = samples.clone();
        sorted.sort_unstable();
        // Nearest-rank percentile.
        let rank = |q: f64| {
            if sorted.is_empty() {
                return 0;
            }
            let i = ((q * sorted.len() as f64).ceil() as usize).clamp(1, sorted.len());
            sorted[i - 1]
        };
        let sum: u64 = sorted.iter().sum();
        Self {
            count: sorted.len() as u64,
            min_ms: sorted.first().copied().unwrap_or(0),
            max_ms: sorted.last().copied().unwrap_or(0),
            mean_ms: if sorted.is_empty() {
                0.0
            } else {
                sum as f64 / sorted.len() as f64
            },
            p50_ms: rank(0.5),
            p95_ms: rank(0.95),
            samples_ms: samples,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RankedEntry {
    pub service_name: String,
    pub service_id: String,
    pub score: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SelectionRecord {
    pub at_ms: u64,
    pub candidates: u64,
    pub ranking: Vec<RankedEntry>,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct EventCounts {
    pub ticks: u64,
    pub document_updates: u64,
    pub churn: u64,
    pub collaborator_refreshes: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct MetricsReport {
    pub seed: u64,
    pub services: Vec<String>,
    pub freshness_window_ms: u64,
    pub hop_latency_ms: u64,
    pub events: EventCounts,
    pub actions: Vec<ActionRecord>,
    pub freshness_lag: BTreeMap<DocumentKind, LagSummary>,
    pub consistency_violations: u64,
    pub violations: Vec<String>,
    pub selections: Vec<SelectionRecord>,
}

impl MetricsReport {
    pub(crate) fn new(config: &ScenarioConfig, services: &[String]) -> Self {
        Self {
            seed: config.seed,
            services: services.to_vec(),
            freshness_window_ms: config.freshness_window_ms,
            hop_latency_ms: config.hop_latency_ms,
            events: EventCounts::default(),
            actions: Vec::new(),
            freshness_lag: BTreeMap::new(),
            consistency_violations: 0,
            violations: Vec::new(),
            selections: Vec::new(),
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("reports serialize");
        s.push('\n');
        s
    }

    pub fn from_json(text: &str) -> Result<Self, serde_json::Error> {
        serde_json::from_str(text)
    }

    /// One row per action, with a header.
    pub fn to_csv(&self) -> Result<String, csv::Error> {
        #[derive(Serialize)]
        #[serde(rename_all = "camelCase")]
        struct Row<'a> {
            index: u64,
            at_ms: u64,
            action: &'a str,
            service: &'a str,
            kinds: u64,
            requests: u64,
            request_bytes: u64,
            response_bytes: u64,
            bytes: u64,
            latency_ms: u64,
            outcome: &'a str,
            detail: &'a str,
            missing: String,
        }
        let mut w = csv::Writer::from_writer(Vec::new());
        if self.actions.is_empty() {
            w.write_record([
                "index",
                "atMs",
                "action",
                "service",
                "kinds",
                "requests",
                "requestBytes",
                "responseBytes",
                "bytes",
                "latencyMs",
                "outcome",
                "detail",
                "missing",
            ])?;
        }
        for a in &self.actions {
            w.serialize(Row {
                index: a.index,
                at_ms: a.at_ms,
                action: &a.action,
                service: a.service.as_deref().unwrap_or(""),
                kinds: a.kinds,
                requests: a.requests,
                request_bytes: a.request_bytes,
                response_bytes: a.response_bytes,
                bytes: a.bytes,
                latency_ms: a.latency_ms,
                outcome: &a.outcome,
                detail: a.detail.as_deref().unwrap_or(""),
                missing: a.missing.join(";"),
            })?;
        }
        let bytes = w.into_inner().map_err(|e| e.into_error())?;
        Ok(String::from_utf8(bytes).expect("csv of strings is UTF-8"))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, thiserror::Error)]
pub enum MetricsError {
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
    #[error(transparent)]
    Csv(#[from] csv::Error),
}

/// Writes the report; emitting the same report again yields the same bytes.
pub fn emit_metrics(report: &MetricsReport, path: &Path, format: Format) -> Result<(), MetricsError> {
    let text = match format {
        Format::Json => report.to_json(),
        Format::Csv => report.to_csv()?,
    };
    std::fs::write(path, text).map_err(|source| MetricsError::Io {
        path: path.display().to_string(),
        source,
    })
}
