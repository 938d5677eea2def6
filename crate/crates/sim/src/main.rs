use std::net::SocketAddr;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::Arc;
use std::time::Duration;

use clap::{Parser, Subcommand};
use mobidesc_core::model::ServiceClass;
use mobidesc_core::{codec, SystemClock, Timestamp};
use mobidesc_net::{HttpTransport, Server};
use mobidesc_provider::snapshot::parse_trace;
use mobidesc_provider::{ProviderAgent, ProviderHandler};
use mobidesc_registry::{FindQuery, Registry, RegistryClient, RegistryHandler};
use mobidesc_resolver::{select, ResolvedDescription, Resolver, SelectionCriteria};
use mobidesc_sim::{emit_metrics, run_scenario, Fixture, FixtureName, Format, ScenarioConfig};

#[derive(Parser)]
#[command(
    name = "mobidesc",
    version,
    about = "Layered service descriptions for mobile providers"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run a registry over HTTP.
    Registry {
        #[arg(long, default_value = "127.0.0.1:8100")]
        listen: SocketAddr,
        /// Append-only journal; replayed on start.
        #[arg(long)]
        journal: Option<PathBuf>,
    },
    /// Host a bundle, publish it, and replay a context trace in real time.
    Provider {
        /// Bundle directory or shipped fixture name.
        #[arg(long)]
        bundle: String,
        /// JSON-lines snapshot trace (`t` in ms from start).
        #[arg(long)]
        trace: Option<PathBuf>,
        #[arg(long, default_value = "127.0.0.1:8200")]
        listen: SocketAddr,
        #[arg(long, default_value = "http://127.0.0.1:8100")]
        registry: String,
        /// Base URL to advertise instead of the bound address.
        #[arg(long)]
        advertise: Option<String>,
    },
    /// Find a service and assemble its full description.
    Resolve {
        registry: String,
        /// Service name (substring) or, with --operation, an operation name.
        query: String,
        #[arg(long)]
        operation: bool,
        /// Also print every assembled document as XML.
        #[arg(long)]
        xml: bool,
        #[arg(long, default_value_t = 10_000)]
        freshness_window_ms: u64,
    },
    /// Rank the services matching a query against selection criteria.
    Select {
        criteria: PathBuf,
        #[arg(long, default_value = "http://127.0.0.1:8100")]
        registry: String,
        #[arg(long, conflicts_with = "operation", required_unless_present = "operation")]
        name: Option<String>,
        #[arg(long)]
        operation: Option<String>,
        #[arg(long, default_value_t = 10)]
        limit: usize,
    },
    /// Run a simulated scenario and write its metrics.
    Sim {
        #[arg(long)]
        config: PathBuf,
        /// Overrides the config's seed.
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out: PathBuf,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Check a bundle's requirement coverage against a service class.
    Conformance {
        /// Shipped fixture name or bundle directory.
        #[arg(long)]
        fixture: String,
        /// Automated, SemiAutomated or Manual; defaults to the fixture's class.
        #[arg(long)]
        profile: Option<String>,
    },
    /// Write the shipped fixtures as bundle directories.
    Fixtures {
        #[arg(long)]
        out: PathBuf,
    },
}

type CliResult = Result<ExitCode, String>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.command {
        Command::Registry { listen, journal } => registry(listen, journal.as_deref()),
        Command::Provider {
            bundle,
            trace,
            listen,
            registry,
            advertise,
        } => provider(&bundle, trace.as_deref(), listen, &registry, advertise),
        Command::Resolve {
            registry,
            query,
            operation,
            xml,
            freshness_window_ms,
        } => resolve(&registry, &query, operation, xml, freshness_window_ms),
        Command::Select {
            criteria,
            registry,
            name,
            operation,
            limit,
        } => select_cmd(&criteria, &registry, FindQuery { name, operation, limit }),
        Command::Sim {
            config,
            seed,
            out,
            format,
        } => sim(&config, seed, &out, format),
        Command::Conformance { fixture, profile } => conformance(&fixture, profile.as_deref()),
        Command::Fixtures { out } => fixtures(&out),
    };
    result.unwrap_or_else(|e| {
        eprintln!("error: {e}");
        ExitCode::FAILURE
    })
}

fn load(source: &str) -> Result<(Option<FixtureName>, Fixture), String> {
    match source.parse::<FixtureName>() {
        Ok(name) => Ok((
            Some(name),
            mobidesc_sim::load_fixture(name.as_str()).map_err(|e| e.to_string())?,
        )),
        Err(_) => Ok((None, Fixture::from_dir(Path::new(source)).map_err(|e| e.to_string())?)),
    }
}

fn transport() -> Result<Arc<HttpTransport>, String> {
    HttpTransport::new(Duration::from_secs(5))
        .map(Arc::new)
        .map_err(|e| e.to_string())
}

fn registry(listen: SocketAddr, journal: Option<&Path>) -> CliResult {
    let clock = Arc::new(SystemClock);
    let registry = match journal {
        Some(path) => Registry::open(path, clock).map_err(|e| e.to_string())?,
        None => Registry::new(clock),
    };
    eprintln!("registry: {} service(s) loaded", registry.len());
    let server =
        Server::spawn(listen, Arc::new(RegistryHandler::new(Arc::new(registry)))).map_err(|e| e.to_string())?;
    eprintln!("registry: listening on {}", server.base_url());
    server.wait().map_err(|e| e.to_string())?;
    Ok(ExitCode::SUCCESS)
}

fn provider(
    bundle: &str,
    trace: Option<&Path>,
    listen: SocketAddr,
    registry: &str,
    advertise: Option<String>,
) -> CliResult {
    let (_, fixture) = load(bundle)?;
    // Bind first so the advertised endpoint is the real one when port 0 is used.
    let slot = Arc::new(std::sync::OnceLock::<Arc<ProviderAgent>>::new());
    let lazy = Arc::new(LazyHandler(slot.clone()));
    let server = Server::spawn(listen, lazy).map_err(|e| e.to_string())?;
    let endpoint = advertise.unwrap_or_else(|| server.base_url());
    let fixture = fixture.relocated(&endpoint);
    let agent = Arc::new(ProviderAgent::host(fixture.bundle.clone()).map_err(|e| e.to_string())?);
    let _ = slot.set(agent.clone());
    eprintln!("provider: {} serving on {endpoint}", fixture.service.name);

    let client = RegistryClient::new(registry, transport()?);
    let request = fixture.publish_request().map_err(|e| e.to_string())?;
    let id = client.publish(&request).map_err(|e| e.to_string())?;
    eprintln!("provider: published as {id}");

    if let Some(path) = trace {
        let text = std::fs::read_to_string(path).map_err(|e| format!("{}: {e}", path.display()))?;
        let start = Timestamp::now();
        let snapshots = parse_trace(&text, start).map_err(|e| format!("{}: {e}", path.display()))?;
        for snapshot in snapshots {
            if let Some(wait) = snapshot.clock.since(Timestamp::now()) {
                std::thread::sleep(wait);
            }
            match agent.watchdog_tick(snapshot) {
                Ok(updates) => {
                    for (slot, stamp) in updates {
                        eprintln!("provider: {slot} updated at {stamp}");
                    }
                }
                Err(e) => eprintln!("provider: tick rejected: {e}"),
            }
        }
        eprintln!("provider: trace finished");
    }
    server.wait().map_err(|e| e.to_string())?;
    Ok(ExitCode::SUCCESS)
}

/// Answers 503 until the agent is installed.
struct LazyHandler(Arc<std::sync::OnceLock<Arc<ProviderAgent>>>);

impl mobidesc_core::wire::Handler for LazyHandler {
    fn handle(&self, request: &mobidesc_core::wire::Request) -> mobidesc_core::wire::Response {
        match self.0.get() {
            Some(agent) => ProviderHandler::new(agent.clone(), Arc::new(SystemClock)).handle(request),
            None => mobidesc_core::wire::Response::new(503, "text/plain", "starting"),
        }
    }
}

fn print_resolved(r: &ResolvedDescription, xml: bool) -> Result<(), String> {
    println!(
        "{} ({}) at {}",
        r.summary.service_name, r.summary.service_id, r.summary.provider_endpoint
    );
    for (kind, d) in &r.documents {
        let stamp = d.doc.timestamp().map_or("-".to_string(), |t| t.to_string());
        println!("  {:<14} {:<8} {stamp}", kind.to_string(), format!("{:?}", d.source));
    }
    for (slot, reason) in &r.missing {
        println!("  missing {slot}: {reason:?}");
    }
    if xml {
        for d in r.documents.values() {
            let wire = codec::serialize(&d.doc).map_err(|e| e.to_string())?;
            println!("{}", String::from_utf8_lossy(wire.as_bytes()));
        }
    }
    Ok(())
}

fn resolve(registry: &str, query: &str, operation: bool, xml: bool, window_ms: u64) -> CliResult {
    let resolver = Resolver::new(registry, transport()?, Arc::new(SystemClock));
    let query = if operation {
        FindQuery::by_operation(query)
    } else {
        FindQuery::by_name(query)
    };
    let found = resolver.find(&query).map_err(|e| e.to_string())?;
    let Some(summary) = found.first() else {
        eprintln!("no service matches");
        return Ok(ExitCode::from(2));
    };
    let resolved = resolver.resolve(summary).map_err(|e| e.to_string())?;
    print_resolved(&resolved, xml)?;
    match mobidesc_resolver::staleness(&resolved, Timestamp::now(), Duration::from_millis(window_ms)) {
        Ok(report) => {
            for kind in report.per_document.keys().filter(|k| report.is_stale(**k)) {
                println!("  stale {kind}");
            }
        }
        Err(e) => println!("  {e}"),
    }
    Ok(ExitCode::SUCCESS)
}

fn select_cmd(criteria: &Path, registry: &str, query: FindQuery) -> CliResult {
    let text = std::fs::read_to_string(criteria).map_err(|e| format!("{}: {e}", criteria.display()))?;
    let criteria = SelectionCriteria::from_json(&text).map_err(|e| e.to_string())?;
    let resolver = Resolver::new(registry, transport()?, Arc::new(SystemClock));
    let found = resolver.find(&query).map_err(|e| e.to_string())?;
    let mut candidates = Vec::new();
    for summary in &found {
        match resolver.resolve(summary) {
            Ok(r) => candidates.push(r),
            Err(e) => eprintln!("skipping {}: {e}", summary.service_name),
        }
    }
    let ranked = select(&candidates, &criteria, Timestamp::now());
    for (i, r) in ranked.iter().enumerate() {
        println!(
            "{}. {} ({}) score {}",
            i + 1,
            r.summary.service_name,
            r.summary.service_id,
            r.score
        );
    }
    if ranked.is_empty() {
        eprintln!("no candidate satisfies the hard constraints");
        return Ok(ExitCode::from(2));
    }
    Ok(ExitCode::SUCCESS)
}

fn sim(config: &Path, seed: Option<u64>, out: &Path, format: Format) -> CliResult {
    let mut config = ScenarioConfig::load(config).map_err(|e| e.to_string())?;
    if let Some(seed) = seed {
        config.seed = seed;
    }
    let report = run_scenario(&config).map_err(|e| e.to_string())?;
    emit_metrics(&report, out, format).map_err(|e| e.to_string())?;
    eprintln!(
        "{} action(s), {} tick(s), {} consistency violation(s)",
        report.actions.len(),
        report.events.ticks,
        report.consistency_violations
    );
    Ok(if report.consistency_violations == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn conformance(source: &str, profile: Option<&str>) -> CliResult {
    let (name, fixture) = load(source)?;
    let class: ServiceClass = match (profile, name) {
        (Some(p), _) => p.parse().map_err(|_| format!("unknown profile {p:?}"))?,
        (None, Some(n)) => n.class(),
        (None, None) => return Err("--profile is required for bundle directories".into()),
    };
    let report = fixture.coverage(class);
    for row in &report.rows {
        let mark = match (row.required, row.present) {
            (true, true) => "ok",
            (true, false) => "MISSING",
            (false, true) => "extra",
            (false, false) => "-",
        };
        println!(
            "{:<8} {:<18} {}",
            mark,
            row.description.to_string(),
            row.placeholder.label()
        );
    }
    println!(
        "{} under {class:?}: {}/{} required placeholders present{}",
        fixture.service.name,
        report.required_present(),
        report.required_count(),
        if report.conformant { "" } else { " (non-conformant)" }
    );
    Ok(if report.conformant {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    })
}

fn fixtures(out: &Path) -> CliResult {
    for name in FixtureName::ALL {
        let dir = out.join(name.as_str());
        mobidesc_sim::build_fixture(name)
            .write_dir(&dir)
            .map_err(|e| e.to_string())?;
        println!("{}", dir.display());
    }
    Ok(ExitCode::SUCCESS)
}
