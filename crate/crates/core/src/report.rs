//! Validation reports: every axiom checker returns one.
//!
//! A report lists, per law, the exact number of violations found and the
//! first few witnesses. Witness lists are capped at [`WITNESS_CAP`] entries
//! so reports stay bounded; counts are always exact.

use serde::{Deserialize, Serialize};

/// Maximum number of witnesses retained per law.
pub const WITNESS_CAP: usize = 16;

/// Violations of a single law, with exact count and capped witnesses.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct LawReport {
    pub law: String,
    pub violations: u64,
    pub witnesses: Vec<String>,
}

impl LawReport {
    pub fn new(law: impl Into<String>) -> Self {
        LawReport {
            law: law.into(),
            violations: 0,
            witnesses: Vec::new(),
        }
    }

    pub fn record(&mut self, witness: impl FnOnce() -> String) {
        self.violations += 1;
        if self.witnesses.len() < WITNESS_CAP {
            self.witnesses.push(witness());
        }
    }

    pub fn ok(&self) -> bool {
        self.violations == 0
    }
}

/// Result of validating one structure against its axioms.
///
/// Empty (no violations across all laws) means the structure is valid.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ValidationReport {
    pub subject: String,
    pub laws: Vec<LawReport>,
    /// Free-form notes surfaced to the reader (formula discrepancies,
    /// derived conventions); notes never affect validity.
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
}

impl ValidationReport {
    pub fn new(subject: impl Into<String>) -> Self {
        ValidationReport {
            subject: subject.into(),
            laws: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn law(&mut self, name: impl Into<String>) -> &mut LawReport {
        self.laws.push(LawReport::new(name));
        self.laws.last_mut().expect("just pushed")
    }

    pub fn push_law(&mut self, law: LawReport) {
        self.laws.push(law);
    }

    pub fn note(&mut self, text: impl Into<String>) {
        self.notes.push(text.into());
    }

    pub fn is_valid(&self) -> bool {
        self.laws.iter().all(LawReport::ok)
    }

    pub fn total_violations(&self) -> u64 {
        self.laws.iter().map(|l| l.violations).sum()
    }

    /// Merge another report in, prefixing its law names.
    pub fn absorb(&mut self, prefix: &str, other: ValidationReport) {
        for mut law in other.laws {
            law.law = format!("{prefix}.{}", law.law);
            self.laws.push(law);
        }
        for note in other.notes {
            self.notes.push(format!("{prefix}: {note}"));
        }
    }

    /// First witness of the first violated law, if any.
    pub fn first_witness(&self) -> Option<&str> {
        self.laws
            .iter()
            .find(|l| !l.ok())
            .and_then(|l| l.witnesses.first().map(String::as_str))
    }
}

impl std::fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        if self.is_valid() {
            write!(f, "{}: valid", self.subject)
        } else {
            writeln!(f, "{}: INVALID", self.subject)?;
            for law in self.laws.iter().filter(|l| !l.ok()) {
                writeln!(
                    f,
                    "  {} violated {} time(s); e.g. {}",
                    law.law,
                    law.violations,
                    law.witnesses.first().map(String::as_str).unwrap_or("-")
                )?;
            }
            Ok(())
        }
    }
}
