//! Simulated device context as sensed by the watchdog.

use mobidesc_core::Timestamp;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum NetworkType {
    WiFi,
    #[serde(rename = "GSM")]
    Gsm,
    #[serde(rename = "WiMAX")]
    WiMax,
    None,
}

impl NetworkType {
    pub const ALL: [NetworkType; 4] = [
        NetworkType::WiFi,
        NetworkType::Gsm,
        NetworkType::WiMax,
        NetworkType::None,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            NetworkType::WiFi => "WiFi",
            NetworkType::Gsm => "GSM",
            NetworkType::WiMax => "WiMAX",
            NetworkType::None => "None",
        }
    }

    /// Nominal bandwidth tier in kbit/s.
    pub fn bandwidth_kbps(self) -> u32 {
        match self {
            NetworkType::WiFi => 54_000,
            NetworkType::WiMax => 30_000,
            NetworkType::Gsm => 384,
            NetworkType::None => 0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Presence {
    Available,
    Busy,
    Away,
}

impl Presence {
    pub const ALL: [Presence; 3] = [Presence::Available, Presence::Busy, Presence::Away];

    pub fn as_str(self) -> &'static str {
        match self {
            Presence::Available => "available",
            Presence::Busy => "busy",
            Presence::Away => "away",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct GeoPoint {
    pub lat: f64,
    pub lon: f64,
}

/// Sensed values without the instant they were taken at.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct Readings {
    pub battery_percent: f64,
    pub charging: bool,
    pub network_type: NetworkType,
    pub gps: GeoPoint,
    pub free_memory_mb: f64,
    pub user_presence: Presence,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ContextSnapshot {
    #[serde(flatten)]
    pub readings: Readings,
    pub clock: Timestamp,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum SnapshotError {
    #[error("batteryPercent {0} outside [0, 100]")]
    Battery(f64),
    #[error("gps ({0}, {1}) outside the valid coordinate range")]
    Gps(f64, f64),
    #[error("freeMemoryMb {0} is negative or not finite")]
    Memory(f64),
    #[error("snapshot clock {next} is earlier than the previous {previous}")]
    ClockRewind { previous: Timestamp, next: Timestamp },
    #[error("trace line {line}: {reason}")]
    Trace { line: usize, reason: String },
}

/// A field of the snapshot that feeds at least one description element.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Field {
    BatteryPercent,
    Charging,
    NetworkType,
    Gps,
    FreeMemoryMb,
    UserPresence,
}

impl Field {
    pub const ALL: [Field; 6] = [
        Field::BatteryPercent,
        Field::Charging,
        Field::NetworkType,
        Field::Gps,
        Field::FreeMemoryMb,
        Field::UserPresence,
    ];
}

impl Readings {
    pub fn validate(&self) -> Result<(), SnapshotError> {
        if !(0.0..=100.0).contains(&self.battery_percent) {
            return Err(SnapshotError::Battery(self.battery_percent));
        }
        let GeoPoint { lat, lon } = self.gps;
        if !(-90.0..=90.0).contains(&lat) || !(-180.0..=180.0).contains(&lon) {
            return Err(SnapshotError::Gps(lat, lon));
        }
        if !(self.free_memory_mb.is_finite() && self.free_memory_mb >= 0.0) {
            return Err(SnapshotError::Memory(self.free_memory_mb));
        }
        Ok(())
    }

    /// Fields whose values differ between `self` and `other`.
    pub fn changed_fields(&self, other: &Readings) -> Vec<Field> {
        Field::ALL
            .into_iter()
            .filter(|f| match f {
                Field::BatteryPercent => self.battery_percent != other.battery_percent,
                Field::Charging => self.charging != other.charging,
                Field::NetworkType => self.network_type != other.network_type,
                Field::Gps => self.gps != other.gps,
                Field::FreeMemoryMb => self.free_memory_mb != other.free_memory_mb,
                Field::UserPresence => self.user_presence != other.user_presence,
            })
            .collect()
    }

    pub fn at(self, clock: Timestamp) -> ContextSnapshot {
        ContextSnapshot { readings: self, clock }
    }
}

impl Default for Readings {
    fn default() -> Self {
        Self {
            battery_percent: 80.0,
            charging: false,
            network_type: NetworkType::WiFi,
            gps: GeoPoint {
                lat: -33.8688,
                lon: 151.2093,
            },
            free_memory_mb: 512.0,
            user_presence: Presence::Available,
        }
    }
}

#[derive(Deserialize)]
struct TraceLine {
    t: u64,
    #[serde(flatten)]
    readings: Readings,
}

/// Parses a snapshot script: one JSON object per line with the snapshot
/// fields and a `t` offset in milliseconds from `start`. Blank lines are
/// skipped; offsets must not decrease.
pub fn parse_trace(text: &str, start: Timestamp) -> Result<Vec<ContextSnapshot>, SnapshotError> {
    let mut out: Vec<ContextSnapshot> = Vec::new();
    for (i, line) in text.lines().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        let bad = |reason: String| SnapshotError::Trace { line: i + 1, reason };
        let parsed: TraceLine = serde_json::from_str(line).map_err(|e| bad(e.to_string()))?;
        parsed.readings.validate().map_err(|e| bad(e.to_string()))?;
        let clock = start.plus_millis(parsed.t as i64);
        if let Some(prev) = out.last() {
            if clock < prev.clock {
                return Err(bad(format!("offset {} goes back in time", parsed.t)));
            }
        }
        out.push(parsed.readings.at(clock));
    }
    Ok(out)
}

/// Seeded random walk over readings; each step changes a random subset of
/// fields (possibly none).
pub struct RandomWalk {
    rng: ChaCha8Rng,
    current: Readings,
    clock: Timestamp,
    step_ms: i64,
    change_probability: f64,
}

impl RandomWalk {
    pub fn new(seed: u64, start: Timestamp, step_ms: i64) -> Self {
        Self {
            rng: ChaCha8Rng::seed_from_u64(seed),
            current: Readings::default(),
            clock: start,
            step_ms,
            change_probability: 0.3,
        }
    }

    pub fn with_initial(mut self, readings: Readings) -> Self {
        self.current = readings;
        self
    }

    pub fn with_change_probability(mut self, p: f64) -> Self {
        self.change_probability = p;
        self
    }
}

impl Iterator for RandomWalk {
    type Item = ContextSnapshot;

    fn next(&mut self) -> Option<ContextSnapshot> {
        let p = self.change_probability;
        let rng = &mut self.rng;
        let r = &mut self.current;
        if rng.gen_bool(p) {
            r.battery_percent = (r.battery_percent + f64::from(rng.gen_range(-5i32..=5))).clamp(0.0, 100.0);
        }
        if rng.gen_bool(p) {
            r.charging = !r.charging;
        }
        if rng.gen_bool(p) {
            r.network_type = *NetworkType::ALL.choose(rng).unwrap();
        }
        if rng.gen_bool(p) {
            r.gps.lat = (r.gps.lat + f64::from(rng.gen_range(-100i32..=100)) / 10_000.0).clamp(-90.0, 90.0);
            r.gps.lon = (r.gps.lon + f64::from(rng.gen_range(-100i32..=100)) / 10_000.0).clamp(-180.0, 180.0);
        }
        if rng.gen_bool(p) {
            r.free_memory_mb = f64::from(rng.gen_range(64u32..=2048));
        }
        if rng.gen_bool(p) {
            r.user_presence = *Presence::ALL.choose(rng).unwrap();
        }
        let snapshot = r.at(self.clock);
        self.clock = self.clock.plus_millis(self.step_ms);
        Some(snapshot)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn t0() -> Timestamp {
        Timestamp::parse("2015-06-01T12:00:00.000Z").unwrap()
    }

    #[test]
    fn trace_lines() {
        let text = r#"{"t":0,"batteryPercent":80,"charging":false,"networkType":"WiFi","gps":{"lat":1.5,"lon":2},"freeMemoryMb":300,"userPresence":"busy"}

{"t":1500,"batteryPercent":60,"charging":true,"networkType":"GSM","gps":{"lat":1.5,"lon":2},"freeMemoryMb":300,"userPresence":"away"}"#;
        let trace = parse_trace(text, t0()).unwrap();
        assert_eq!(trace.len(), 2);
        assert_eq!(trace[1].clock, t0().plus_millis(1500));
        assert_eq!(trace[1].readings.network_type, NetworkType::Gsm);
        assert_eq!(
            trace[1].readings.changed_fields(&trace[0].readings),
            [
                Field::BatteryPercent,
                Field::Charging,
                Field::NetworkType,
                Field::UserPresence
            ]
        );
    }

    #[test]
    fn trace_rejects_bad_lines() {
        let line = |t: u64, battery: f64| {
            format!(
                r#"{{"t":{t},"batteryPercent":{battery},"charging":false,"networkType":"WiFi","gps":{{"lat":0,"lon":0}},"freeMemoryMb":1,"userPresence":"away"}}"#
            )
        };
        assert!(matches!(
            parse_trace(&line(0, 140.0), t0()),
            Err(SnapshotError::Trace { line: 1, .. })
        ));
        let text = format!("{}\n{}", line(10, 50.0), line(5, 50.0));
        assert!(matches!(
            parse_trace(&text, t0()),
            Err(SnapshotError::Trace { line: 2, .. })
        ));
        assert!(parse_trace("{}", t0()).is_err());
    }

    #[test]
    fn random_walk_is_seeded_and_valid() {
        let a: Vec<_> = RandomWalk::new(7, t0(), 1000).take(200).collect();
        let b: Vec<_> = RandomWalk::new(7, t0(), 1000).take(200).collect();
        assert_eq!(a, b);
        for w in a.windows(2) {
            assert!(w[0].clock < w[1].clock);
            w[1].readings.validate().unwrap();
        }
    }
}
