use serde::{Deserialize, Serialize};

use crate::CampaignConfig;

/// Which side of the tolerance a check must land on.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    /// `value ≤ tolerance`; the value is an error.
    AtMost,
    /// `value ≥ tolerance`; used by negative controls.
    AtLeast,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub bound: Bound,
    pub pass: bool,
}

impl Check {
    pub fn at_most(name: &str, value: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            value,
            tolerance,
            bound: Bound::AtMost,
            pass: value <= tolerance,
        }
    }

    pub fn at_least(name: &str, value: f64, tolerance: f64) -> Self {
        Check {
            name: name.into(),
            value,
            tolerance,
            bound: Bound::AtLeast,
            pass: value >= tolerance,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteReport {
    pub name: String,
    pub seed: u64,
    pub checks_run: usize,
    /// Largest error among `at_most` checks, with its tolerance.
    pub max_error: f64,
    pub tolerance: f64,
    pub pass: bool,
    pub checks: Vec<Check>,
}

impl SuiteReport {
    pub fn new(name: &str, seed: u64, checks: Vec<Check>) -> Self {
        let worst = checks
            .iter()
            .filter(|c| c.bound == Bound::AtMost)
            .max_by(|a, b| (a.value / a.tolerance.max(f64::MIN_POSITIVE)).total_cmp(&(b.value / b.tolerance.max(f64::MIN_POSITIVE))));
        SuiteReport {
            name: name.into(),
            seed,
            checks_run: checks.len(),
            max_error: worst.map_or(0.0, |c| c.value),
            tolerance: worst.map_or(0.0, |c| c.tolerance),
            pass: checks.iter().all(|c| c.pass),
            checks,
        }
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }
}

/// Deterministic for a fixed configuration; wall times live in [`Timings`].
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VerificationReport {
    pub config: CampaignConfig,
    pub pass: bool,
    pub suites: Vec<SuiteReport>,
}

impl VerificationReport {
    pub fn new(config: CampaignConfig, suites: Vec<SuiteReport>) -> Self {
        VerificationReport {
            pass: suites.iter().all(|s| s.pass),
            config,
            suites,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }

    /// `suite/check` for every failing check.
    pub fn failed_checks(&self) -> Vec<String> {
        self.suites
            .iter()
            .flat_map(|s| s.failures().map(move |c| format!("{}/{}", s.name, c.name)))
            .collect()
    }

    pub fn summary(&self) -> String {
        let mut out = String::new();
        for s in &self.suites {
            out.push_str(&format!(
                "{:<11} {} {:>2} checks, max error {:.2e} (tolerance {:.0e})\n",
                s.name,
                if s.pass { "PASS" } else { "FAIL" },
                s.checks_run,
                s.max_error,
                s.tolerance
            ));
            for c in s.failures() {
                let op = if c.bound == Bound::AtMost { ">" } else { "<" };
                out.push_str(&format!("  failed: {}/{}: {:.3e} {op} {:.0e}\n", s.name, c.name, c.value, c.tolerance));
            }
        }
        out
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SuiteTiming {
    pub suite: String,
    pub seconds: f64,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
pub struct Timings {
    pub suites: Vec<SuiteTiming>,
}
