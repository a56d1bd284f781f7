//! Check reports: what was observed, what was expected and why.

use std::fmt::{self, Write as _};

use serde::{Deserialize, Serialize};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum Verdict {
    Pass,
    Fail,
    Inapplicable,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Pass => "PASS",
            Verdict::Fail => "FAIL",
            Verdict::Inapplicable => "INAPPLICABLE",
        })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", tag = "kind", content = "value")]
pub enum Expected {
    Equals(i64),
    NonZero,
    AtLeast(i64),
    AtMost(i64),
    /// No expectation: the value is recorded only.
    Recorded,
}

impl Expected {
    pub fn holds(&self, v: i64) -> bool {
        match *self {
            Expected::Equals(e) => v == e,
            Expected::NonZero => v != 0,
            Expected::AtLeast(e) => v >= e,
            Expected::AtMost(e) => v <= e,
            Expected::Recorded => true,
        }
    }
}

impl fmt::Display for Expected {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expected::Equals(e) => write!(f, "= {e}"),
            Expected::NonZero => f.write_str("!= 0"),
            Expected::AtLeast(e) => write!(f, ">= {e}"),
            Expected::AtMost(e) => write!(f, "<= {e}"),
            Expected::Recorded => f.write_str("(recorded)"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Expectation {
    pub label: String,
    pub expected: Expected,
    pub provenance: String,
}

/// One observed integer for one prime.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Cell {
    pub prime: u64,
    pub label: String,
    pub value: i64,
}

/// The result of running a check on a single model over a single prime.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct Outcome {
    pub observed: Vec<(String, i64)>,
    pub expected: Vec<Expectation>,
    /// Set when a hypothesis of the check does not hold for the model.
    pub inapplicable: Option<String>,
    pub notes: Vec<String>,
}

impl Outcome {
    pub fn inapplicable(reason: impl Into<String>) -> Self {
        Outcome {
            inapplicable: Some(reason.into()),
            ..Self::default()
        }
    }

    pub fn observe(&mut self, label: impl Into<String>, value: i64) {
        self.observed.push((label.into(), value));
    }

    pub fn expect(&mut self, label: impl Into<String>, expected: Expected, provenance: &str) {
        self.expected.push(Expectation {
            label: label.into(),
            expected,
            provenance: provenance.to_string(),
        });
    }

    /// Records a value together with what it should be.
    pub fn check(&mut self, label: impl Into<String>, value: i64, expected: Expected, provenance: &str) {
        let label = label.into();
        self.observe(label.clone(), value);
        self.expect(label, expected, provenance);
    }

    pub fn value(&self, label: &str) -> Option<i64> {
        self.observed.iter().find(|(l, _)| l == label).map(|&(_, v)| v)
    }

    /// Labels whose expectation is violated (or which were never observed).
    pub fn violations(&self) -> Vec<String> {
        self.expected
            .iter()
            .filter(|e| !self.value(&e.label).is_some_and(|v| e.expected.holds(v)))
            .map(|e| e.label.clone())
            .collect()
    }

    pub fn verdict(&self) -> Verdict {
        if self.inapplicable.is_some() {
            Verdict::Inapplicable
        } else if self.violations().is_empty() {
            Verdict::Pass
        } else {
            Verdict::Fail
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckReport {
    pub name: String,
    pub model: String,
    pub primes: Vec<u64>,
    pub cells: Vec<Cell>,
    pub expected: Vec<Expectation>,
    pub provenance: Vec<String>,
    pub verdict: Verdict,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub suspect_primes: Vec<u64>,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub notes: Vec<String>,
    pub millis: u64,
}

impl CheckReport {
    /// Values observed for `label`, one per prime in order.
    pub fn values(&self, label: &str) -> Vec<i64> {
        self.cells.iter().filter(|c| c.label == label).map(|c| c.value).collect()
    }

    /// The common value of `label` across primes, if there is exactly one.
    pub fn consensus_value(&self, label: &str) -> Option<i64> {
        let vs = self.values(label);
        let first = *vs.first()?;
        vs.iter().all(|&v| v == first).then_some(first)
    }

    pub fn without_timing(&self) -> Self {
        CheckReport {
            millis: 0,
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let primes: Vec<String> = self.primes.iter().map(|p| p.to_string()).collect();
        let _ = writeln!(
            s,
            "{} [{}] on {} over p = {}  ({} ms)",
            self.verdict,
            self.name,
            self.model,
            primes.join(", "),
            self.millis
        );
        let mut labels: Vec<&str> = Vec::new();
        for c in &self.cells {
            if !labels.contains(&c.label.as_str()) {
                labels.push(&c.label);
            }
        }
        for label in labels {
            let vs: Vec<String> = self.values(label).iter().map(|v| v.to_string()).collect();
            let expect = self
                .expected
                .iter()
                .find(|e| e.label == label)
                .map(|e| format!("  expected {}  ({})", e.expected, e.provenance))
                .unwrap_or_default();
            let _ = writeln!(s, "    {label:<40} {}{expect}", vs.join(" / "));
        }
        if !self.suspect_primes.is_empty() {
            let ps: Vec<String> = self.suspect_primes.iter().map(|p| p.to_string()).collect();
            let _ = writeln!(s, "    suspect primes: {}", ps.join(", "));
        }
        for n in &self.notes {
            let _ = writeln!(s, "    note: {n}");
        }
        s
    }
}

/// Reports of a suite run, in a fixed order.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub reports: Vec<CheckReport>,
}

impl SuiteReport {
    pub fn failures(&self) -> usize {
        self.reports.iter().filter(|r| r.verdict == Verdict::Fail).count()
    }

    pub fn without_timing(&self) -> Self {
        SuiteReport {
            reports: self.reports.iter().map(CheckReport::without_timing).collect(),
            ..self.clone()
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports always serialize")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        for r in &self.reports {
            s.push_str(&r.to_text());
        }
        let count = |v| self.reports.iter().filter(|r| r.verdict == v).count();
        let _ = writeln!(
            s,
            "suite {}: {} PASS, {} FAIL, {} INAPPLICABLE",
            self.suite,
            count(Verdict::Pass),
            count(Verdict::Fail),
            count(Verdict::Inapplicable)
        );
        s
    }
}
