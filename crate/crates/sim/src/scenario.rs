//! Deterministic scenario runner.
//!
//! A scenario publishes its services, then replays context traces, churn,
//! collaborator timers and a consumer script in instant order on a single
//! logical clock over the in-process loopback network. Instants are
//! millisecond offsets from the fixture epoch.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::sync::Arc;
use std::time::Duration;

use mobidesc_core::wire::{Loopback, Metered, Traffic};
use mobidesc_core::{Clock, DescriptionDocument, DocumentKind, Half, LogicalClock, Slot, Timestamp};
use mobidesc_provider::snapshot::parse_trace;
use mobidesc_provider::{ContextSnapshot, ProviderAgent, ProviderHandler, RandomWalk, Readings, Reputation};
use mobidesc_registry::{FindQuery, Registry, RegistryHandler};
use mobidesc_resolver::{
    merge_split, select, staleness, MissingReason, ResolvedDescription, Resolver, SelectionCriteria, Source,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::fixtures::{fixture_epoch, Fixture, FixtureError, FixtureName};
use crate::metrics::{ActionRecord, LagSummary, MetricsReport, RankedEntry, SelectionRecord};

pub const REGISTRY_ENDPOINT: &str = "http://registry.sim:8100";

fn default_hop() -> u64 {
    10
}

/// Where a provider's context readings come from.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub enum TraceSource {
    /// JSON-lines file: `{"t": <ms>, "batteryPercent": ..., ...}` per line.
    File(PathBuf),
    /// The same records inline.
    Inline(Vec<serde_json::Value>),
    /// Seeded random walk, one tick every `stepMs` until the horizon.
    #[serde(rename_all = "camelCase")]
    RandomWalk {
        step_ms: u64,
        #[serde(default = "default_change_probability")]
        change_probability: f64,
    },
}

fn default_change_probability() -> f64 {
    0.3
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ChurnEvent {
    pub at_ms: u64,
    pub provider: String,
    pub online: bool,
}

/// Every `intervalMs` each provider is independently offline with the given
/// probability for the next interval.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct RandomChurn {
    pub interval_ms: u64,
    pub offline_probability: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "action", rename_all = "camelCase")]
pub enum Action {
    #[serde(rename_all = "camelCase")]
    Find {
        #[serde(default)]
        name: Option<String>,
        #[serde(default)]
        operation: Option<String>,
        #[serde(default = "default_limit")]
        limit: usize,
    },
    Resolve {
        service: String,
    },
    Refresh {
        service: String,
        kinds: Vec<DocumentKind>,
    },
    /// Ranks the cached resolutions of `services` (all resolved services when
    /// empty); no network traffic.
    Select {
        criteria: SelectionCriteria,
        #[serde(default)]
        services: Vec<String>,
    },
}

fn default_limit() -> usize {
    10
}

impl Action {
    pub fn name(&self) -> &'static str {
        match self {
            Action::Find { .. } => "find",
            Action::Resolve { .. } => "resolve",
            Action::Refresh { .. } => "refresh",
            Action::Select { .. } => "select",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct ScriptStep {
    pub at_ms: u64,
    #[serde(flatten)]
    pub action: Action,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase", deny_unknown_fields)]
pub struct ScenarioConfig {
    /// Shipped fixture names or bundle directories.
    #[serde(default)]
    pub fixtures: Vec<String>,
    /// Keyed by provider id (the service name).
    #[serde(default)]
    pub traces: BTreeMap<String, TraceSource>,
    #[serde(default)]
    pub churn: Vec<ChurnEvent>,
    #[serde(default)]
    pub random_churn: Option<RandomChurn>,
    #[serde(default)]
    pub script: Vec<ScriptStep>,
    pub freshness_window_ms: u64,
    #[serde(default)]
    pub seed: u64,
    #[serde(default = "default_hop")]
    pub hop_latency_ms: u64,
    /// Horizon for random streams and timers; defaults to the last scripted
    /// instant.
    #[serde(default)]
    pub duration_ms: Option<u64>,
}

#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("invalid scenario: {0}")]
    Config(String),
    #[error(transparent)]
    Fixture(#[from] FixtureError),
    #[error("{path}: {source}")]
    Io { path: String, source: std::io::Error },
}

fn config_err(msg: impl Into<String>) -> ScenarioError {
    ScenarioError::Config(msg.into())
}

impl ScenarioConfig {
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        serde_json::from_str(text).map_err(|e| config_err(e.to_string()))
    }

    /// Reads a config file; relative bundle and trace paths are taken
    /// relative to the file's directory.
    pub fn load(path: &Path) -> Result<Self, ScenarioError> {
        let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
            path: path.display().to_string(),
            source,
        })?;
        let mut config = Self::from_json(&text)?;
        let base = path.parent().unwrap_or(Path::new("."));
        for f in &mut config.fixtures {
            if f.parse::<FixtureName>().is_err() && Path::new(f).is_relative() {
                *f = base.join(&*f).display().to_string();
            }
        }
        for source in config.traces.values_mut() {
            if let TraceSource::File(p) = source {
                if p.is_relative() {
                    *p = base.join(&*p);
                }
            }
        }
        Ok(config)
    }

    /// Last instant any stream is allowed to reach.
    pub fn horizon_ms(&self) -> u64 {
        self.duration_ms.unwrap_or_else(|| {
            let churn = self.churn.iter().map(|c| c.at_ms);
            let script = self.script.iter().map(|s| s.at_ms);
            churn.chain(script).max().unwrap_or(0)
        })
    }

    fn validate(&self, providers: &[String]) -> Result<(), ScenarioError> {
        let known = |id: &str| providers.iter().any(|p| p == id);
        for id in self.traces.keys() {
            if !known(id) {
                return Err(config_err(format!("trace for unknown provider {id:?}")));
            }
        }
        for pair in self.churn.windows(2) {
            if pair[1].at_ms < pair[0].at_ms {
                return Err(config_err("churn instants must not decrease"));
            }
        }
        for c in &self.churn {
            if !known(&c.provider) {
                return Err(config_err(format!("churn for unknown provider {:?}", c.provider)));
            }
        }
        for pair in self.script.windows(2) {
            if pair[1].at_ms < pair[0].at_ms {
                return Err(config_err("script instants must not decrease"));
            }
        }
        for step in &self.script {
            match &step.action {
                Action::Refresh { kinds, .. } if kinds.contains(&DocumentKind::Functional) => {
                    return Err(config_err(
                        "the functional description cannot be refreshed from a provider",
                    ));
                }
                Action::Select { criteria, .. } => criteria.validate().map_err(|e| config_err(e.to_string()))?,
                _ => {}
            }
        }
        if let Some(rc) = &self.random_churn {
            if rc.interval_ms == 0 || !(0.0..=1.0).contains(&rc.offline_probability) {
                return Err(config_err(
                    "randomChurn needs intervalMs > 0 and offlineProbability in [0, 1]",
                ));
            }
        }
        for (id, source) in &self.traces {
            if let TraceSource::RandomWalk {
                step_ms,
                change_probability,
            } = source
            {
                if *step_ms == 0 || !(0.0..=1.0).contains(change_probability) {
                    return Err(config_err(format!(
                        "randomWalk for {id:?} needs stepMs > 0 and changeProbability in [0, 1]"
                    )));
                }
            }
        }
        if self.hop_latency_ms > 60_000 {
            return Err(config_err("hopLatencyMs above one minute"));
        }
        Ok(())
    }
}

fn load_one(source: &str) -> Result<Fixture, FixtureError> {
    match source.parse::<FixtureName>() {
        Ok(name) => crate::fixtures::load_fixture(name.as_str()),
        Err(_) => Fixture::from_dir(Path::new(source)),
    }
}

#[derive(Debug, Clone)]
enum Event {
    Churn {
        provider: String,
        online: bool,
    },
    Tick {
        provider: String,
        snapshot: ContextSnapshot,
    },
    Collaborator {
        provider: String,
    },
    Step(Action),
}

impl Event {
    fn priority(&self) -> u8 {
        match self {
            Event::Churn { .. } => 0,
            Event::Tick { .. } => 1,
            Event::Collaborator { .. } => 2,
            Event::Step(_) => 3,
        }
    }
}

struct Provider {
    fixture: Fixture,
    agent: Arc<ProviderAgent>,
    stamps: BTreeMap<Slot, Option<Timestamp>>,
    feedback: u64,
}

struct Run<'a> {
    config: &'a ScenarioConfig,
    start: Timestamp,
    clock: Arc<LogicalClock>,
    net: Arc<Metered<Loopback>>,
    resolver: Resolver,
    providers: BTreeMap<String, Provider>,
    cache: BTreeMap<String, ResolvedDescription>,
    resolve_bytes: BTreeMap<String, u64>,
    rng: ChaCha8Rng,
    report: MetricsReport,
    lags: BTreeMap<DocumentKind, Vec<u64>>,
}

fn offset(start: Timestamp, at: Timestamp) -> u64 {
    (at.as_millis() - start.as_millis()).max(0) as u64
}

/// Runs a scenario to completion. Identical configs give identical reports.
pub fn run_scenario(config: &ScenarioConfig) -> Result<MetricsReport, ScenarioError> {
    let fixtures: Vec<Fixture> = config.fixtures.iter().map(|f| load_one(f)).collect::<Result<_, _>>()?;
    let ids: Vec<String> = fixtures.iter().map(|f| f.service.name.clone()).collect();
    for (i, id) in ids.iter().enumerate() {
        if ids[..i].contains(id) {
            return Err(config_err(format!("service {id:?} listed twice")));
        }
    }
    config.validate(&ids)?;

    let start = fixture_epoch();
    let clock = Arc::new(LogicalClock::new(start));
    let net = Arc::new(Metered::new(Loopback::new()));
    let registry = Arc::new(Registry::new(clock.clone()));
    let internal = |e: String| config_err(e);
    net.inner()
        .register(REGISTRY_ENDPOINT, Arc::new(RegistryHandler::new(registry.clone())))
        .map_err(|e| internal(e.to_string()))?;
    let mut providers = BTreeMap::new();
    for fixture in fixtures {
        let agent = Arc::new(
            ProviderAgent::host(fixture.bundle.clone())
                .map_err(|e| internal(format!("{}: {e}", fixture.service.name)))?,
        );
        net.inner()
            .register(
                &fixture.provider_endpoint,
                Arc::new(ProviderHandler::new(agent.clone(), clock.clone())),
            )
            .map_err(|e| internal(e.to_string()))?;
        let request = fixture.publish_request().map_err(|e| internal(e.to_string()))?;
        registry.publish(request).map_err(|e| internal(e.to_string()))?;
        let stamps = agent
            .hosted_slots()
            .into_iter()
            .map(|s| (s, agent.document(s).and_then(|d| d.doc.timestamp())))
            .collect();
        providers.insert(
            fixture.service.name.clone(),
            Provider {
                fixture,
                agent,
                stamps,
                feedback: 0,
            },
        );
    }

    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let events = timeline(config, &ids, &providers, start, &mut rng)?;
    let mut run = Run {
        config,
        start,
        clock: clock.clone(),
        net: net.clone(),
        resolver: Resolver::new(REGISTRY_ENDPOINT, net, clock),
        providers,
        cache: BTreeMap::new(),
        resolve_bytes: BTreeMap::new(),
        rng,
        report: MetricsReport::new(config, &ids),
        lags: BTreeMap::new(),
    };
    for (at, event) in events {
        run.clock.advance_to(start.plus_millis(at as i64));
        run.apply(event);
    }
    run.report.freshness_lag = run.lags.into_iter().map(|(k, v)| (k, LagSummary::of(v))).collect();
    run.report.consistency_violations = run.report.violations.len() as u64;
    Ok(run.report)
}

fn timeline(
    config: &ScenarioConfig,
    ids: &[String],
    providers: &BTreeMap<String, Provider>,
    start: Timestamp,
    rng: &mut ChaCha8Rng,
) -> Result<Vec<(u64, Event)>, ScenarioError> {
    let horizon = config.horizon_ms();
    let mut events: Vec<(u64, Event)> = Vec::new();
    for c in &config.churn {
        events.push((
            c.at_ms,
            Event::Churn {
                provider: c.provider.clone(),
                online: c.online,
            },
        ));
    }
    // Sub-seeds are drawn in a fixed order so adding a stream never
    // perturbs the others' draws.
    let churn_seed: u64 = rng.gen();
    let walk_seeds: Vec<u64> = ids.iter().map(|_| rng.gen()).collect();
    if let Some(rc) = &config.random_churn {
        let mut churn_rng = ChaCha8Rng::seed_from_u64(churn_seed);
        let mut at = rc.interval_ms;
        while at <= horizon {
            for id in ids {
                let online = !churn_rng.gen_bool(rc.offline_probability);
                events.push((
                    at,
                    Event::Churn {
                        provider: id.clone(),
                        online,
                    },
                ));
            }
            at += rc.interval_ms;
        }
    }
    for (id, seed) in ids.iter().zip(walk_seeds) {
        let snapshots: Vec<ContextSnapshot> = match config.traces.get(id) {
            None => Vec::new(),
            Some(TraceSource::File(path)) => {
                let text = std::fs::read_to_string(path).map_err(|source| ScenarioError::Io {
                    path: path.display().to_string(),
                    source,
                })?;
                parse_trace(&text, start).map_err(|e| config_err(format!("trace {}: {e}", path.display())))?
            }
            Some(TraceSource::Inline(lines)) => {
                let text: Vec<String> = lines.iter().map(|l| l.to_string()).collect();
                parse_trace(&text.join("\n"), start).map_err(|e| config_err(format!("inline trace for {id}: {e}")))?
            }
            Some(TraceSource::RandomWalk {
                step_ms,
                change_probability,
            }) => RandomWalk::new(seed, start.plus_millis(*step_ms as i64), *step_ms as i64)
                .with_initial(Readings::default())
                .with_change_probability(*change_probability)
                .take_while(|s| offset(start, s.clock) <= horizon)
                .collect(),
        };
        for snapshot in snapshots {
            events.push((
                offset(start, snapshot.clock),
                Event::Tick {
                    provider: id.clone(),
                    snapshot,
                },
            ));
        }
        if let Some(period) = providers[id]
            .agent
            .document(Slot::Collaborator)
            .and_then(|d| {
                d.doc
                    .element_at("updateFrequency")
                    .ok()
                    .and_then(|n| n.as_text())
                    .and_then(|t| t.parse::<f64>().ok())
            })
            .map(|s| (s * 1000.0).round() as u64)
            .filter(|p| *p > 0)
        {
            let mut at = period;
            while at <= horizon {
                events.push((at, Event::Collaborator { provider: id.clone() }));
                at += period;
            }
        }
    }
    for step in &config.script {
        events.push((step.at_ms, Event::Step(step.action.clone())));
    }
    // Stable: equal (instant, priority) keep insertion order.
    events.sort_by_key(|(at, e)| (*at, e.priority()));
    Ok(events)
}

impl Run<'_> {
    fn now(&self) -> Timestamp {
        self.clock.now()
    }

    fn violation(&mut self, msg: String) {
        let at = offset(self.start, self.now());
        self.report.violations.push(format!("@{at}ms {msg}"));
    }

    fn apply(&mut self, event: Event) {
        match event {
            Event::Churn { provider, online } => {
                self.report.events.churn += 1;
                self.providers[&provider].agent.set_online(online);
            }
            Event::Tick { provider, snapshot } => self.tick(&provider, snapshot),
            Event::Collaborator { provider } => {
                let now = self.now();
                let score = f64::from(self.rng.gen_range(50u32..=100)) / 100.0;
                let p = self.providers.get_mut(&provider).expect("known provider");
                p.feedback += 1;
                let rep = Reputation {
                    score,
                    feedback_count: p.feedback,
                };
                match p.agent.refresh_collaborator(now, rep) {
                    Ok(Some(stamp)) => {
                        self.report.events.collaborator_refreshes += 1;
                        self.check_stamp(&provider, Slot::Collaborator, stamp);
                    }
                    Ok(None) => {}
                    Err(e) => self.violation(format!("{provider}: collaborator refresh failed: {e}")),
                }
            }
            Event::Step(action) => self.step(action),
        }
    }

    fn check_stamp(&mut self, provider: &str, slot: Slot, stamp: Timestamp) {
        let now = self.now();
        let p = self.providers.get_mut(provider).expect("known provider");
        let previous = p.stamps.insert(slot, Some(stamp)).flatten();
        if previous.is_some_and(|prev| stamp < prev) {
            self.violation(format!("{provider}/{slot}: timestamp went backwards"));
        }
        if stamp > now {
            self.violation(format!("{provider}/{slot}: stamped in the future"));
        }
    }

    fn tick(&mut self, provider: &str, snapshot: ContextSnapshot) {
        self.report.events.ticks += 1;
        let result = self.providers[provider].agent.watchdog_tick(snapshot);
        match result {
            Ok(updates) => {
                self.report.events.document_updates += updates.len() as u64;
                for (slot, stamp) in updates {
                    self.check_stamp(provider, slot, stamp);
                }
            }
            Err(e) => self.violation(format!("{provider}: tick rejected: {e}")),
        }
    }

    fn sample_lags(&mut self, resolved: &ResolvedDescription, kinds: &[DocumentKind]) {
        let now = self.now();
        for kind in kinds {
            if let Some(ts) = resolved.document(*kind).and_then(DescriptionDocument::timestamp) {
                if let Some(age) = now.since(ts) {
                    self.lags.entry(*kind).or_default().push(age.as_millis() as u64);
                }
            }
        }
    }

    fn step(&mut self, action: Action) {
        let before = self.net.traffic();
        let at_ms = offset(self.start, self.now());
        let mut record = ActionRecord::new(self.report.actions.len(), at_ms, action.name());
        match action {
            Action::Find { name, operation, limit } => {
                let query = FindQuery { name, operation, limit };
                match self.resolver.find(&query) {
                    Ok(found) => record.detail = Some(format!("{} found", found.len())),
                    Err(e) => record.fail(e.to_string()),
                }
            }
            Action::Resolve { service } => {
                record.service = Some(service.clone());
                self.resolve(&service, &mut record);
            }
            Action::Refresh { service, kinds } => {
                record.service = Some(service.clone());
                self.refresh(&service, &kinds, &mut record);
            }
            Action::Select { criteria, services } => self.select(&criteria, &services, &mut record),
        }
        let traffic: Traffic = self.net.traffic().since(&before);
        record.set_traffic(traffic, self.config.hop_latency_ms);
        if record.action == "resolve" && record.outcome == "ok" {
            if let Some(s) = &record.service {
                self.resolve_bytes.insert(s.clone(), traffic.bytes());
            }
        }
        if let (true, Some(s)) = (
            record.action == "refresh" && record.outcome == "ok" && record.kinds == 1,
            &record.service,
        ) {
            if let Some(full) = self.resolve_bytes.get(s).copied() {
                if traffic.bytes() >= full {
                    let msg = format!(
                        "{s}: single refresh moved {} bytes, full resolve {full}",
                        traffic.bytes()
                    );
                    self.violation(msg);
                }
            }
        }
        self.report.actions.push(record);
    }

    fn resolve(&mut self, service: &str, record: &mut ActionRecord) {
        let found = match self.resolver.find(&FindQuery::by_name(service)) {
            Ok(found) => found,
            Err(e) => return record.fail(e.to_string()),
        };
        let Some(summary) = found.into_iter().find(|s| s.service_name == service) else {
            record.outcome = "notFound".into();
            return;
        };
        match self.resolver.resolve(&summary) {
            Ok(resolved) => {
                let kinds: Vec<DocumentKind> = DocumentKind::ALL.to_vec();
                record.kinds = kinds.len() as u64 - 1;
                self.check_resolution(service, &resolved, &kinds);
                self.sample_lags(&resolved, &kinds);
                record.note_missing(&resolved);
                self.cache.insert(service.to_string(), resolved);
            }
            Err(e) => record.fail(e.to_string()),
        }
    }

    fn refresh(&mut self, service: &str, kinds: &[DocumentKind], record: &mut ActionRecord) {
        let Some(previous) = self.cache.get(service) else {
            record.outcome = "notResolved".into();
            return;
        };
        match self.resolver.refresh(previous, kinds) {
            Ok(resolved) => {
                record.kinds = kinds.len() as u64;
                self.check_resolution(service, &resolved, kinds);
                self.sample_lags(&resolved, kinds);
                record.note_missing(&resolved);
                self.cache.insert(service.to_string(), resolved);
            }
            Err(e) => record.fail(e.to_string()),
        }
    }

    fn select(&mut self, criteria: &SelectionCriteria, services: &[String], record: &mut ActionRecord) {
        let candidates: Vec<ResolvedDescription> = if services.is_empty() {
            self.cache.values().cloned().collect()
        } else {
            services.iter().filter_map(|s| self.cache.get(s).cloned()).collect()
        };
        let now = self.now();
        for c in &candidates {
            let kinds: Vec<DocumentKind> = c.documents.keys().copied().collect();
            self.sample_lags(c, &kinds);
        }
        let ranked = select(&candidates, criteria, now);
        record.detail = Some(format!("{} of {} candidates ranked", ranked.len(), candidates.len()));
        self.report.selections.push(SelectionRecord {
            at_ms: offset(self.start, now),
            candidates: candidates.len() as u64,
            ranking: ranked
                .into_iter()
                .map(|r| RankedEntry {
                    service_name: r.summary.service_name,
                    service_id: r.summary.service_id,
                    score: r.score,
                })
                .collect(),
        });
    }

    /// Cross-checks a fresh resolution against the ground truth held by the
    /// registry fixture and the provider agent at this instant.
    fn check_resolution(&mut self, service: &str, resolved: &ResolvedDescription, fetched: &[DocumentKind]) {
        let mut problems = Vec::new();
        let now = self.now();
        let p = &self.providers[service];
        let online = p.agent.is_online();
        for kind in DocumentKind::ALL {
            if !resolved.covers(kind) {
                problems.push(format!("{kind} neither present nor missing"));
            }
        }
        match resolved.documents.get(&DocumentKind::Functional) {
            Some(d) if d.source == Source::Registry && d.doc == p.fixture.functional => {}
            _ => problems.push("functional description differs from the published one".into()),
        }
        if let Err(skew) = staleness(resolved, now, Duration::from_millis(self.config.freshness_window_ms)) {
            problems.push(skew.to_string());
        }
        for kind in fetched.iter().filter(|k| **k != DocumentKind::Functional) {
            let slot = kind.provider_slot().expect("provider kinds");
            let static_half = Slot::ALL
                .into_iter()
                .find(|s| s.kind() == *kind && s.half() == Half::Static)
                .and_then(|s| p.fixture.static_docs.get(&s));
            let hosted = p.agent.document(slot);
            let linked = resolved.locations.contains_key(kind);
            let missing = resolved.missing.iter().find(|(s, _)| *s == slot).map(|(_, r)| *r);
            let got = resolved.documents.get(kind);
            match (linked, &hosted, online) {
                (true, Some(h), true) => {
                    let truth = match static_half {
                        Some(s) => merge_split(s, &h.doc).ok(),
                        None => Some(h.doc.clone()),
                    };
                    let fine = got.is_some_and(|g| g.source == Source::Provider && Some(&g.doc) == truth.as_ref());
                    if !fine || missing.is_some() {
                        problems.push(format!("{kind} does not match the provider's current document"));
                    }
                }
                (true, Some(_), false) => {
                    if missing != Some(MissingReason::Offline) {
                        problems.push(format!("{kind} not reported offline"));
                    }
                }
                _ => {
                    if missing.is_none() {
                        problems.push(format!("{kind} is not hosted yet not reported missing"));
                    }
                }
            }
            if missing.is_some() {
                let fallback_ok = match (static_half, got) {
                    (Some(s), Some(g)) => g.source == Source::Registry && &g.doc == s,
                    (None, None) => true,
                    _ => false,
                };
                if !fallback_ok {
                    problems.push(format!("{kind} missing but not reduced to its registry half"));
                }
            }
        }
        for problem in problems {
            self.violation(format!("{service}: {problem}"));
        }
    }
}
