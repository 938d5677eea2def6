//! Reference oracles for the watchdog, shared by the property tests and the
//! acceptance suite.

use std::collections::BTreeMap;
use std::sync::atomic::{AtomicBool, AtomicUsize, Ordering};
use std::sync::Arc;

use mobidesc_core::{codec, Slot, Timestamp};

use crate::agent::ProviderAgent;
use crate::snapshot::{ContextSnapshot, Readings};

/// Brute-force re-derivation: the element values each document should show
/// for given readings, spelled out independently of the agent's mapping.
pub fn expected_view(slot: Slot, r: &Readings) -> BTreeMap<&'static str, String> {
    let mut v = BTreeMap::new();
    match slot {
        Slot::Contextual => {
            v.insert("deviceContext/batteryStatus", r.battery_percent.to_string());
            v.insert("deviceContext/charging", r.charging.to_string());
            v.insert("deviceContext/networkType", r.network_type.as_str().to_string());
            v.insert("userContext/location/gps/latitude", r.gps.lat.to_string());
            v.insert("userContext/location/gps/longitude", r.gps.lon.to_string());
            v.insert("userContext/presence", r.user_presence.as_str().to_string());
        }
        Slot::HardwareDynamic => {
            v.insert("powerDetail/batteryPercent", r.battery_percent.to_string());
            v.insert("powerDetail/charging", r.charging.to_string());
            v.insert(
                "powerDetail/estimatedRuntimeMinutes",
                (r.battery_percent * 6.0).to_string(),
            );
            v.insert("memoryDetail/primaryMb", r.free_memory_mb.to_string());
        }
        Slot::NonFunctional => {
            let kbps = match r.network_type.as_str() {
                "WiFi" => "54000",
                "WiMAX" => "30000",
                "GSM" => "384",
                _ => "0",
            };
            v.insert("networkQoS/bandwidthCapability", kbps.to_string());
        }
        Slot::DataSourceDynamic => {
            v.insert("locationDetail/gps/latitude", r.gps.lat.to_string());
            v.insert("locationDetail/gps/longitude", r.gps.lon.to_string());
        }
        _ => {}
    }
    v
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct WalkStats {
    pub ticks: usize,
    pub updates: usize,
}

/// Drives `agent` through `walk`, checking after every tick that exactly the
/// documents whose derived view changed were rewritten (with the tick's
/// instant and the derived values), that the others are the very same
/// allocation, and that no timestamp went backwards.
pub fn check_walk(agent: &ProviderAgent, walk: impl IntoIterator<Item = ContextSnapshot>) -> Result<WalkStats, String> {
    let slots = agent.hosted_slots();
    let current = |s: &Slot| agent.document(*s).expect("hosted");
    let mut previous: Option<Readings> = None;
    let mut stamps: BTreeMap<Slot, Option<Timestamp>> =
        slots.iter().map(|s| (*s, current(s).doc.timestamp())).collect();
    let mut stats = WalkStats::default();
    for snap in walk {
        let before: BTreeMap<Slot, _> = slots.iter().map(|s| (*s, current(s))).collect();
        let report = agent.watchdog_tick(snap).map_err(|e| e.to_string())?;
        let updated: Vec<Slot> = report.iter().map(|(s, _)| *s).collect();
        for slot in &slots {
            let view = expected_view(*slot, &snap.readings);
            let should = !view.is_empty() && previous.is_none_or(|prev| expected_view(*slot, &prev) != view);
            if updated.contains(slot) != should {
                return Err(format!(
                    "{slot} at {}: updated={} expected={should}",
                    snap.clock, !should
                ));
            }
            let now = current(slot);
            if should {
                if now.doc.timestamp() != Some(snap.clock) {
                    return Err(format!(
                        "{slot} stamped {:?}, tick at {}",
                        now.doc.timestamp(),
                        snap.clock
                    ));
                }
                for (path, value) in &view {
                    let got = now.doc.element_at(path).ok().and_then(|n| n.as_text());
                    if got != Some(value.as_str()) {
                        return Err(format!("{slot} {path} = {got:?}, expected {value}"));
                    }
                }
            } else if !Arc::ptr_eq(&now, &before[slot]) {
                return Err(format!("{slot} rewritten without a change at {}", snap.clock));
            }
            let ts = now.doc.timestamp();
            if ts < stamps[slot] {
                return Err(format!("{slot} went back in time at {}", snap.clock));
            }
            stamps.insert(*slot, ts);
        }
        stats.ticks += 1;
        stats.updates += updated.len();
        previous = Some(snap.readings);
    }
    Ok(stats)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RaceStats {
    pub reads: usize,
    pub violations: usize,
}

/// Races `readers` threads fetching the contextual document against `ticks`
/// watchdog ticks. Tick i is stamped `start + i` ms and carries battery
/// `i % 101`, so every consistent document pairs its stamp with exactly one
/// battery value; a read pairing them otherwise is torn. The agent must host
/// a contextual document stamped at or before `start`.
pub fn race_readers(
    agent: Arc<ProviderAgent>,
    start: Timestamp,
    readers: usize,
    ticks: i64,
) -> Result<RaceStats, String> {
    let initial = agent.document(Slot::Contextual).ok_or("no contextual document")?;
    let initial_stamp = initial.doc.timestamp();
    let initial_battery = initial
        .doc
        .element_at("deviceContext/batteryStatus")
        .ok()
        .and_then(|n| n.as_text())
        .map(str::to_string);
    let done = AtomicBool::new(false);
    let reads = AtomicUsize::new(0);
    let violations = AtomicUsize::new(0);
    let mut tick_error = None;
    std::thread::scope(|s| {
        for _ in 0..readers {
            s.spawn(|| loop {
                let finished = done.load(Ordering::SeqCst);
                let consistent = agent
                    .get_document(Slot::Contextual)
                    .ok()
                    .and_then(|wire| codec::parse(&wire).ok())
                    .is_some_and(|doc| {
                        let battery = doc
                            .element_at("deviceContext/batteryStatus")
                            .ok()
                            .and_then(|n| n.as_text())
                            .map(str::to_string);
                        if doc.timestamp() == initial_stamp {
                            battery == initial_battery
                        } else {
                            let i = doc.timestamp().map_or(-1, |t| t.as_millis() - start.as_millis());
                            battery == Some(((i % 101) as f64).to_string())
                        }
                    });
                if !consistent {
                    violations.fetch_add(1, Ordering::Relaxed);
                }
                reads.fetch_add(1, Ordering::Relaxed);
                if finished {
                    break;
                }
            });
        }
        for i in 1..=ticks {
            let r = Readings {
                battery_percent: (i % 101) as f64,
                ..Readings::default()
            };
            if let Err(e) = agent.watchdog_tick(r.at(start.plus_millis(i))) {
                tick_error = Some(e.to_string());
                break;
            }
        }
        done.store(true, Ordering::SeqCst);
    });
    if let Some(e) = tick_error {
        return Err(e);
    }
    Ok(RaceStats {
        reads: reads.into_inner(),
        violations: violations.into_inner(),
    })
}
