use std::io::{BufRead, BufReader};
use std::process::{Child, Command, Output, Stdio};
use std::sync::mpsc;
use std::time::Duration;

const BIN: &str = env!("CARGO_BIN_EXE_mobidesc");

/// A background `mobidesc` process whose stderr lines are forwarded.
struct Daemon {
    child: Child,
    lines: mpsc::Receiver<String>,
}

impl Daemon {
    fn start(args: &[&str]) -> Self {
        let mut child = Command::new(BIN)
            .args(args)
            .stderr(Stdio::piped())
            .stdout(Stdio::null())
            .spawn()
            .unwrap();
        let stderr = child.stderr.take().unwrap();
        let (tx, lines) = mpsc::channel();
        std::thread::spawn(move || {
            for line in BufReader::new(stderr).lines().map_while(Result::ok) {
                if tx.send(line).is_err() {
                    break;
                }
            }
        });
        Self { child, lines }
    }

    /// Waits for a line containing `marker` and returns what follows it.
    fn expect(&self, marker: &str) -> String {
        loop {
            let line = self
                .lines
                .recv_timeout(Duration::from_secs(20))
                .unwrap_or_else(|_| panic!("no {marker:?}"));
            if let Some((_, rest)) = line.split_once(marker) {
                return rest.trim().to_string();
            }
        }
    }
}

impl Drop for Daemon {
    fn drop(&mut self) {
        let _ = self.child.kill();
        let _ = self.child.wait();
    }
}

fn run(args: &[&str]) -> Output {
    Command::new(BIN).args(args).output().unwrap()
}

fn stdout(o: &Output) -> String {
    String::from_utf8_lossy(&o.stdout).into_owned()
}

#[test]
fn registry_provider_and_consumer_over_http() {
    let dir = tempfile::tempdir().unwrap();
    let journal = dir.path().join("registry.journal");
    let trace = dir.path().join("trace.jsonl");
    std::fs::write(
        &trace,
        r#"{"t":0,"batteryPercent":70,"charging":false,"networkType":"WiFi","gps":{"lat":45.07,"lon":7.68},"freeMemoryMb":300,"userPresence":"available"}
{"t":200,"batteryPercent":69,"charging":false,"networkType":"WiFi","gps":{"lat":45.07,"lon":7.68},"freeMemoryMb":300,"userPresence":"available"}
"#,
    )
    .unwrap();

    let registry = Daemon::start(&[
        "registry",
        "--listen",
        "127.0.0.1:0",
        "--journal",
        journal.to_str().unwrap(),
    ]);
    let registry_url = registry.expect("listening on");
    let provider = Daemon::start(&[
        "provider",
        "--bundle",
        "SalesmanTracking",
        "--listen",
        "127.0.0.1:0",
        "--registry",
        &registry_url,
        "--trace",
        trace.to_str().unwrap(),
    ]);
    assert_eq!(provider.expect("published as"), "svc-000001");
    provider.expect("trace finished");

    let out = run(&["resolve", &registry_url, "getLocation", "--operation"]);
    assert!(out.status.success(), "{out:?}");
    let text = stdout(&out);
    assert!(text.starts_with("SalesmanTracking (svc-000001)"), "{text}");
    assert!(text.contains("contextual") && text.contains("Provider"), "{text}");
    assert!(!text.contains("missing"), "{text}");

    let out = run(&["resolve", &registry_url, "getLocation", "--operation", "--xml"]);
    assert!(
        stdout(&out).contains(r#"<batteryStatus isDynamic="true">69</batteryStatus>"#),
        "{}",
        stdout(&out)
    );

    let criteria = dir.path().join("criteria.json");
    std::fs::write(
        &criteria,
        r#"{"hard":[{"kind":"contextual","path":"deviceContext/batteryStatus","op":">=","bound":50}],
            "soft":[{"kind":"contextual","path":"deviceContext/networkType","op":"==","bound":"WiFi","weight":1.5}],
            "freshnessWindow":600000}"#,
    )
    .unwrap();
    let out = run(&[
        "select",
        criteria.to_str().unwrap(),
        "--registry",
        &registry_url,
        "--name",
        "Salesman",
    ]);
    assert_eq!(
        stdout(&out).trim(),
        "1. SalesmanTracking (svc-000001) score 1.5",
        "{out:?}"
    );

    // The provider going away leaves only registry-held documents.
    drop(provider);
    let out = run(&["resolve", &registry_url, "SalesmanTracking"]);
    assert!(
        stdout(&out).contains("missing contextual: LinkBroken"),
        "{}",
        stdout(&out)
    );

    // The journal survives a registry restart.
    drop(registry);
    let registry = Daemon::start(&[
        "registry",
        "--listen",
        "127.0.0.1:0",
        "--journal",
        journal.to_str().unwrap(),
    ]);
    let url = registry.expect("listening on");
    let out = run(&["resolve", &url, "Salesman"]);
    assert!(stdout(&out).starts_with("SalesmanTracking (svc-000001)"), "{out:?}");

    let out = run(&["resolve", &url, "Nobody"]);
    assert_eq!(out.status.code(), Some(2));
}

#[test]
fn conformance_exit_codes() {
    let ok = run(&["conformance", "--fixture", "ST"]);
    assert!(ok.status.success());
    assert!(stdout(&ok).contains("29/29"), "{}", stdout(&ok));
    let bad = run(&["conformance", "--fixture", "CPM", "--profile", "Automated"]);
    assert_eq!(bad.status.code(), Some(1));
    assert_eq!(stdout(&bad).matches("MISSING").count(), 11);
    let unknown = run(&["conformance", "--fixture", "CPM", "--profile", "Robotic"]);
    assert!(String::from_utf8_lossy(&unknown.stderr).contains("unknown profile"));
}

#[test]
fn fixtures_and_sim_commands() {
    let dir = tempfile::tempdir().unwrap();
    assert!(run(&["fixtures", "--out", dir.path().to_str().unwrap()])
        .status
        .success());
    let cpm = dir.path().join("CarPoolingMate");
    let out = run(&["conformance", "--fixture", cpm.to_str().unwrap(), "--profile", "Manual"]);
    assert!(out.status.success(), "{out:?}");

    let config = concat!(env!("CARGO_MANIFEST_DIR"), "/scenarios/demo.json");
    let a = dir.path().join("a.json");
    let b = dir.path().join("b.json");
    let csv = dir.path().join("a.csv");
    for (path, format) in [(&a, "json"), (&b, "json"), (&csv, "csv")] {
        let out = run(&[
            "sim",
            "--config",
            config,
            "--out",
            path.to_str().unwrap(),
            "--format",
            format,
        ]);
        assert!(out.status.success(), "{out:?}");
    }
    assert_eq!(std::fs::read(&a).unwrap(), std::fs::read(&b).unwrap());
    let c = dir.path().join("c.json");
    run(&["sim", "--config", config, "--seed", "8", "--out", c.to_str().unwrap()]);
    assert_ne!(std::fs::read(&a).unwrap(), std::fs::read(&c).unwrap());
    assert_eq!(std::fs::read_to_string(&csv).unwrap().lines().count(), 11);
}
