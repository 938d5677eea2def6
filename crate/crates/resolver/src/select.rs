//! Multi-aspect service selection: hard filters, weighted soft preferences,
//! deterministic ranking.

use std::cmp::Ordering;
use std::time::Duration;

use mobidesc_core::{DocumentKind, ElementPath, Timestamp};
use mobidesc_registry::ServiceSummary;
use serde::{Deserialize, Serialize};

use crate::resolve::ResolvedDescription;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Comparator {
    #[serde(rename = "<")]
    Lt,
    #[serde(rename = "<=")]
    Le,
    #[serde(rename = "==")]
    Eq,
    #[serde(rename = "!=")]
    Ne,
    #[serde(rename = ">=")]
    Ge,
    #[serde(rename = ">")]
    Gt,
}

impl Comparator {
    pub const ALL: [Comparator; 6] = [
        Comparator::Lt,
        Comparator::Le,
        Comparator::Eq,
        Comparator::Ne,
        Comparator::Ge,
        Comparator::Gt,
    ];

    pub fn holds(self, ord: Ordering) -> bool {
        match self {
            Comparator::Lt => ord == Ordering::Less,
            Comparator::Le => ord != Ordering::Greater,
            Comparator::Eq => ord == Ordering::Equal,
            Comparator::Ne => ord != Ordering::Equal,
            Comparator::Ge => ord != Ordering::Less,
            Comparator::Gt => ord == Ordering::Greater,
        }
    }
}

/// Numbers compare numerically (values that do not parse fail); text
/// compares by code point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Bound {
    Number(f64),
    Text(String),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Predicate {
    pub kind: DocumentKind,
    pub path: ElementPath,
    pub op: Comparator,
    pub bound: Bound,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Preference {
    #[serde(flatten)]
    pub predicate: Predicate,
    pub weight: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "camelCase")]
pub struct SelectionCriteria {
    #[serde(default)]
    pub hard: Vec<Predicate>,
    #[serde(default)]
    pub soft: Vec<Preference>,
    /// Maximum acceptable document age, in milliseconds on the wire.
    #[serde(with = "millis")]
    pub freshness_window: Duration,
}

mod millis {
    use std::time::Duration;

    use serde::{Deserialize, Deserializer, Serializer};

    pub fn serialize<S: Serializer>(d: &Duration, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_u64(d.as_millis() as u64)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Duration, D::Error> {
        u64::deserialize(d).map(Duration::from_millis)
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CriteriaError {
    #[error("preference {index} has weight {weight}; weights must be positive and finite")]
    BadWeight { index: usize, weight: f64 },
    #[error("predicate bound {0} is not finite")]
    BadBound(f64),
    #[error("criteria JSON: {0}")]
    Json(String),
}

impl SelectionCriteria {
    pub fn new(freshness_window: Duration) -> Self {
        Self {
            hard: Vec::new(),
            soft: Vec::new(),
            freshness_window,
        }
    }

    pub fn validate(&self) -> Result<(), CriteriaError> {
        for (index, p) in self.soft.iter().enumerate() {
            if !(p.weight.is_finite() && p.weight > 0.0) {
                return Err(CriteriaError::BadWeight {
                    index,
                    weight: p.weight,
                });
            }
        }
        for p in self.hard.iter().chain(self.soft.iter().map(|s| &s.predicate)) {
            if let Bound::Number(n) = p.bound {
                if !n.is_finite() {
                    return Err(CriteriaError::BadBound(n));
                }
            }
        }
        Ok(())
    }

    pub fn from_json(text: &str) -> Result<Self, CriteriaError> {
        let c: Self = serde_json::from_str(text).map_err(|e| CriteriaError::Json(e.to_string()))?;
        c.validate()?;
        Ok(c)
    }
}

/// Whether a predicate holds for a candidate at `now`. Absent documents or
/// elements, and documents older than the window (or stamped in the
/// future), make it fail.
pub fn evaluate(p: &Predicate, candidate: &ResolvedDescription, now: Timestamp, window: Duration) -> bool {
    let Some(doc) = candidate.document(p.kind) else {
        return false;
    };
    if let Some(stamped) = doc.timestamp() {
        match now.since(stamped) {
            Some(age) if age <= window => {}
            _ => return false,
        }
    }
    let Some(value) = doc.element(&p.path).and_then(|n| n.as_text()) else {
        return false;
    };
    let ord = match &p.bound {
        Bound::Number(b) => match value.trim().parse::<f64>() {
            Ok(v) if v.is_finite() => v.total_cmp(b),
            _ => return false,
        },
        Bound::Text(b) => value.cmp(b.as_str()),
    };
    p.op.holds(ord)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ranked {
    pub summary: ServiceSummary,
    pub score: f64,
}

/// Filters by the hard predicates, scores survivors by the summed weights of
/// satisfied preferences and ranks by score, then name, then id.
pub fn select(candidates: &[ResolvedDescription], criteria: &SelectionCriteria, now: Timestamp) -> Vec<Ranked> {
    let window = criteria.freshness_window;
    let mut ranked: Vec<Ranked> = candidates
        .iter()
        .filter(|c| criteria.hard.iter().all(|p| evaluate(p, c, now, window)))
        .map(|c| Ranked {
            summary: c.summary.clone(),
            score: criteria
                .soft
                .iter()
                .filter(|s| evaluate(&s.predicate, c, now, window))
                // Not `sum()`: an empty f64 sum is -0.0, which total_cmp
                // orders below 0.0.
                .fold(0.0, |acc, s| acc + s.weight),
        })
        .collect();
    ranked.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.summary.service_name.cmp(&b.summary.service_name))
            .then_with(|| a.summary.service_id.cmp(&b.summary.service_id))
    });
    ranked
}
