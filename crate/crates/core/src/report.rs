//! Structured pass/fail records for every check in the crate.

use std::collections::BTreeMap;
use std::fmt;
use std::time::Duration;

use serde::Serialize;

use crate::error::Error;
use crate::exact::{GaussianRational, Rational, Vector};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Pass,
    Fail,
    InputError,
}

/// Machine-readable evidence attached to a failed (or informative) sub-check.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Witness {
    /// A vector in the module's basis coordinates.
    Vector {
        vector: Vec<String>,
        note: String,
    },
    /// A pair of basis indices, e.g. an entry of a form or operator matrix.
    Entry {
        row: usize,
        col: usize,
        note: String,
    },
    /// A failed leading principal minor of a Hermitian matrix.
    Minor {
        grade: i32,
        p: i32,
        q: i32,
        index: usize,
        value: String,
        vector: Vec<String>,
    },
    /// A rank or dimension deficiency.
    Rank {
        grade: i32,
        expected: usize,
        found: usize,
    },
    Note {
        note: String,
    },
}

impl Witness {
    pub fn vector(v: &[GaussianRational], note: impl Into<String>) -> Self {
        Witness::Vector {
            vector: encode_vector(v),
            note: note.into(),
        }
    }

    pub fn entry(row: usize, col: usize, note: impl Into<String>) -> Self {
        Witness::Entry {
            row,
            col,
            note: note.into(),
        }
    }

    pub fn note(note: impl Into<String>) -> Self {
        Witness::Note { note: note.into() }
    }
}

pub fn encode_vector(v: &[GaussianRational]) -> Vec<String> {
    v.iter().map(|x| x.to_string()).collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SubCheck {
    pub name: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub witness: Option<Witness>,
}

/// Record of one named check.
#[derive(Clone, Debug, Serialize)]
pub struct CheckReport {
    pub check: String,
    /// Short tag naming the statement being exercised, e.g. `mixed-hrr`.
    pub theorem: String,
    pub verdict: Verdict,
    pub subchecks: Vec<SubCheck>,
    /// Auxiliary data (dimensions, determinants, graded counts).
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub data: BTreeMap<String, serde_json::Value>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    /// Wall time; kept out of JSON so reports stay byte-identical across runs.
    #[serde(skip)]
    pub elapsed: Duration,
}

impl CheckReport {
    pub fn new(check: impl Into<String>, theorem: impl Into<String>) -> Self {
        CheckReport {
            check: check.into(),
            theorem: theorem.into(),
            verdict: Verdict::Pass,
            subchecks: Vec::new(),
            data: BTreeMap::new(),
            error: None,
            elapsed: Duration::ZERO,
        }
    }

    pub fn input_error(check: impl Into<String>, theorem: impl Into<String>, err: &Error) -> Self {
        let mut r = CheckReport::new(check, theorem);
        r.verdict = Verdict::InputError;
        r.error = Some(err.to_string());
        r
    }

    pub fn record(&mut self, name: impl Into<String>, passed: bool, witness: Option<Witness>) {
        if !passed && self.verdict == Verdict::Pass {
            self.verdict = Verdict::Fail;
        }
        self.subchecks.push(SubCheck {
            name: name.into(),
            passed,
            witness,
        });
    }

    pub fn pass(&mut self, name: impl Into<String>) {
        self.record(name, true, None);
    }

    pub fn fail(&mut self, name: impl Into<String>, witness: Witness) {
        self.record(name, false, Some(witness));
    }

    pub fn set_data(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("report data serializes");
        self.data.insert(key.to_string(), v);
    }

    /// Copies another report's sub-checks under a name prefix.
    pub fn absorb(&mut self, prefix: &str, other: &CheckReport) {
        if other.verdict == Verdict::InputError {
            self.record(
                format!("{prefix}: input error"),
                false,
                other.error.as_ref().map(|e| Witness::note(e.clone())),
            );
        }
        for s in &other.subchecks {
            self.record(format!("{prefix}: {}", s.name), s.passed, s.witness.clone());
        }
    }

    pub fn passed(&self) -> bool {
        self.verdict == Verdict::Pass
    }

    pub fn failures(&self) -> impl Iterator<Item = &SubCheck> {
        self.subchecks.iter().filter(|s| !s.passed)
    }

    pub fn first_failure(&self) -> Option<&SubCheck> {
        self.failures().next()
    }

    pub fn with_elapsed(mut self, d: Duration) -> Self {
        self.elapsed = d;
        self
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("report serializes")
    }
}

impl fmt::Display for CheckReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let verdict = match self.verdict {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::InputError => "INPUT-ERROR",
        };
        write!(
            f,
            "[{verdict}] {} ({}) {} sub-checks, {:.1} ms",
            self.check,
            self.theorem,
            self.subchecks.len(),
            self.elapsed.as_secs_f64() * 1e3
        )?;
        if let Some(e) = &self.error {
            write!(f, "\n    error: {e}")?;
        }
        for s in self.failures() {
            write!(f, "\n    failed: {}", s.name)?;
            if let Some(w) = &s.witness {
                write!(
                    f,
                    " witness={}",
                    serde_json::to_string(w).unwrap_or_default()
                )?;
            }
        }
        Ok(())
    }
}

/// Encodes a rational for report data.
pub fn encode_rational(r: &Rational) -> String {
    crate::exact::rational::format_rational(r)
}

pub fn encode_vectors(vs: &[Vector]) -> Vec<Vec<String>> {
    vs.iter().map(|v| encode_vector(v)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn verdict_tracks_failures() {
        let mut r = CheckReport::new("demo", "tag");
        r.pass("a");
        assert!(r.passed());
        r.fail("b", Witness::entry(1, 2, "asymmetric"));
        assert_eq!(r.verdict, Verdict::Fail);
        assert_eq!(r.first_failure().unwrap().name, "b");
        let json = r.to_json();
        assert!(json.contains("\"kind\":\"entry\""));
        assert!(!json.contains("elapsed"));
    }
}
