//! Millisecond UTC instants and the clocks that produce them.

use std::fmt;
use std::str::FromStr;
use std::sync::atomic::{AtomicI64, Ordering};
use std::time::Duration;

use chrono::{DateTime, NaiveDateTime, Utc};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

const WIRE_FORMAT: &str = "%Y-%m-%dT%H:%M:%S%.3fZ";

/// A UTC instant with millisecond precision.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Timestamp(i64);

impl Timestamp {
    pub const fn from_millis(millis: i64) -> Self {
        Self(millis)
    }

    pub const fn as_millis(self) -> i64 {
        self.0
    }

    pub fn now() -> Self {
        Self(Utc::now().timestamp_millis())
    }

    pub fn plus_millis(self, millis: i64) -> Self {
        Self(self.0 + millis)
    }

    pub fn plus(self, d: Duration) -> Self {
        self.plus_millis(d.as_millis() as i64)
    }

    /// Elapsed time from `earlier` to `self`, or `None` when `earlier` is later.
    pub fn since(self, earlier: Timestamp) -> Option<Duration> {
        (self.0 >= earlier.0).then(|| Duration::from_millis((self.0 - earlier.0) as u64))
    }

    /// Parses the canonical `YYYY-MM-DDTHH:MM:SS.mmmZ` form.
    pub fn parse(s: &str) -> Result<Self, TimestampError> {
        let naive = NaiveDateTime::parse_from_str(s, WIRE_FORMAT).map_err(|_| TimestampError(s.to_string()))?;
        let ts = Self(naive.and_utc().timestamp_millis());
        // Reject inputs whose fractional part is not exactly three digits.
        if ts.to_string() != s {
            return Err(TimestampError(s.to_string()));
        }
        Ok(ts)
    }
}

impl fmt::Display for Timestamp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match DateTime::<Utc>::from_timestamp_millis(self.0) {
            Some(dt) => write!(f, "{}", dt.format(WIRE_FORMAT)),
            None => write!(f, "<out of range: {}ms>", self.0),
        }
    }
}

impl FromStr for Timestamp {
    type Err = TimestampError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

impl Serialize for Timestamp {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Timestamp {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        Self::parse(&s).map_err(serde::de::Error::custom)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("not a canonical UTC timestamp: {0:?}")]
pub struct TimestampError(pub String);

/// Source of "now" for registries, agents and consumers.
pub trait Clock: Send + Sync {
    fn now(&self) -> Timestamp;
}

/// Wall clock.
#[derive(Debug, Default, Clone, Copy)]
pub struct SystemClock;

impl Clock for SystemClock {
    fn now(&self) -> Timestamp {
        Timestamp::now()
    }
}

/// Manually driven clock shared by every component of a simulation.
#[derive(Debug)]
pub struct LogicalClock {
    millis: AtomicI64,
}

impl LogicalClock {
    pub fn new(start: Timestamp) -> Self {
        Self {
            millis: AtomicI64::new(start.as_millis()),
        }
    }

    /// Moves the clock forward to `t`. Earlier instants are ignored so the
    /// clock never runs backwards.
    pub fn advance_to(&self, t: Timestamp) {
        self.millis.fetch_max(t.as_millis(), Ordering::SeqCst);
    }
}

impl Clock for LogicalClock {
    fn now(&self) -> Timestamp {
        Timestamp(self.millis.load(Ordering::SeqCst))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn canonical_form() {
        let t = Timestamp::parse("2015-06-01T12:00:00.000Z").unwrap();
        assert_eq!(t.as_millis(), 1_433_160_000_000);
        assert_eq!(t.plus_millis(1).to_string(), "2015-06-01T12:00:00.001Z");
    }

    #[test]
    fn rejects_non_canonical() {
        for bad in [
            "not-a-date",
            "2015-06-01T12:00:00Z",
            "2015-06-01T12:00:00.0001Z",
            "2015-06-01T12:00:00.000+00:00",
            "",
        ] {
            assert!(Timestamp::parse(bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn since_is_directional() {
        let a = Timestamp::from_millis(1_000);
        let b = a.plus_millis(5_000);
        assert_eq!(b.since(a), Some(Duration::from_secs(5)));
        assert_eq!(a.since(b), None);
    }

    #[test]
    fn logical_clock_never_rewinds() {
        let c = LogicalClock::new(Timestamp::from_millis(10));
        c.advance_to(Timestamp::from_millis(5));
        assert_eq!(c.now().as_millis(), 10);
        c.advance_to(Timestamp::from_millis(20));
        assert_eq!(c.now().as_millis(), 20);
    }
}
