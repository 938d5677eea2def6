//! Requirement-coverage conformance of a set of description documents.

use mobidesc_core::model::{requirement_profile, Placeholder, RequirementMatrix, ServiceClass};
use mobidesc_core::{DescriptionDocument, DocumentKind};
use serde::{Deserialize, Serialize};

use crate::fixtures::{Fixture, FixtureName};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RowCoverage {
    pub placeholder: Placeholder,
    pub description: DocumentKind,
    pub required: bool,
    pub present: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConformanceReport {
    pub rows: Vec<RowCoverage>,
    /// Every required row is present; extra rows are allowed.
    pub conformant: bool,
}

impl ConformanceReport {
    pub fn missing_required(&self) -> Vec<Placeholder> {
        self.rows
            .iter()
            .filter(|r| r.required && !r.present)
            .map(|r| r.placeholder)
            .collect()
    }

    /// Present rows the profile does not ask for.
    pub fn extra(&self) -> Vec<Placeholder> {
        self.rows
            .iter()
            .filter(|r| !r.required && r.present)
            .map(|r| r.placeholder)
            .collect()
    }

    pub fn required_count(&self) -> usize {
        self.rows.iter().filter(|r| r.required).count()
    }

    pub fn required_present(&self) -> usize {
        self.rows.iter().filter(|r| r.required && r.present).count()
    }

    pub fn is_present(&self, p: Placeholder) -> bool {
        self.rows.iter().any(|r| r.placeholder == p && r.present)
    }
}

/// Checks which matrix rows the documents realise. Split descriptions may
/// be passed as their two halves; a row counts if either half has it.
pub fn verify_coverage<'a>(
    docs: impl IntoIterator<Item = &'a DescriptionDocument>,
    profile: &RequirementMatrix,
) -> ConformanceReport {
    let docs: Vec<&DescriptionDocument> = docs.into_iter().collect();
    let rows: Vec<RowCoverage> = profile
        .rows
        .iter()
        .map(|(p, required)| RowCoverage {
            placeholder: *p,
            description: p.kind(),
            required: *required,
            present: docs.iter().any(|d| p.is_present_in(d)),
        })
        .collect();
    let conformant = rows.iter().all(|r| !r.required || r.present);
    ConformanceReport { rows, conformant }
}

impl Fixture {
    pub fn coverage(&self, class: ServiceClass) -> ConformanceReport {
        verify_coverage(self.documents().into_values(), &requirement_profile(class))
    }
}

/// One row of the transcribed coverage table.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GoldenRow {
    pub description: String,
    pub placeholder: String,
    /// Cells in [`FixtureName::ALL`] order.
    pub cells: [bool; 3],
}

impl GoldenRow {
    pub fn cell(&self, name: FixtureName) -> bool {
        let i = FixtureName::ALL.iter().position(|n| *n == name).expect("known fixture");
        self.cells[i]
    }
}

pub const GOLDEN_MATRIX_CSV: &str = include_str!("../fixtures/coverage.csv");

#[derive(Debug, thiserror::Error)]
pub enum GoldenError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("unexpected header {0:?}")]
    Header(Vec<String>),
    #[error("row {row}: cell {value:?} is neither yes nor no")]
    Cell { row: usize, value: String },
}

/// Parses a coverage table: `description,placeholder,<fixture>...` with
/// `yes`/`no` cells.
pub fn parse_golden(text: &str) -> Result<Vec<GoldenRow>, GoldenError> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let header: Vec<String> = reader.headers()?.iter().map(str::to_string).collect();
    let expected: Vec<String> = ["description", "placeholder"]
        .into_iter()
        .map(str::to_string)
        .chain(FixtureName::ALL.iter().map(|n| n.as_str().to_string()))
        .collect();
    if header != expected {
        return Err(GoldenError::Header(header));
    }
    let mut rows = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let record = record?;
        let mut cells = [false; 3];
        for (c, cell) in cells.iter_mut().enumerate() {
            *cell = match &record[c + 2] {
                "yes" => true,
                "no" => false,
                other => {
                    return Err(GoldenError::Cell {
                        row: i + 1,
                        value: other.to_string(),
                    })
                }
            };
        }
        rows.push(GoldenRow {
            description: record[0].to_string(),
            placeholder: record[1].to_string(),
            cells,
        });
    }
    Ok(rows)
}

pub fn golden_matrix() -> Vec<GoldenRow> {
    parse_golden(GOLDEN_MATRIX_CSV).expect("checked-in coverage table parses")
}

/// Cell-by-cell comparison of the golden table against both the requirement
/// profiles and the shipped fixtures. Returns one message per mismatch.
pub fn check_against_golden(golden: &[GoldenRow], fixtures: &[(FixtureName, &Fixture)]) -> Vec<String> {
    let mut mismatches = Vec::new();
    if golden.len() != Placeholder::ALL.len() {
        mismatches.push(format!(
            "golden table has {} rows, matrix has {}",
            golden.len(),
            Placeholder::ALL.len()
        ));
    }
    for (row, p) in golden.iter().zip(Placeholder::ALL) {
        if row.placeholder != p.label() || !same_kind(&row.description, p.kind()) {
            mismatches.push(format!(
                "golden row {:?}/{:?} does not match {p}",
                row.description, row.placeholder
            ));
        }
    }
    for (name, fixture) in fixtures {
        let profile = requirement_profile(name.class());
        let report = fixture.coverage(name.class());
        for (row, p) in golden.iter().zip(Placeholder::ALL) {
            let want = row.cell(*name);
            if profile.required(*p) != want {
                mismatches.push(format!(
                    "{name} profile: {p} required={} golden={want}",
                    profile.required(*p)
                ));
            }
            if report.is_present(*p) != want {
                mismatches.push(format!(
                    "{name} fixture: {p} present={} golden={want}",
                    report.is_present(*p)
                ));
            }
        }
    }
    mismatches
}

fn same_kind(label: &str, kind: DocumentKind) -> bool {
    format!("{kind:?}") == label
}
