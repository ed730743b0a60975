//! Run reports: checks with residuals, sector energies, sparsity, timings.

use std::collections::BTreeMap;
use std::path::Path;
use std::time::Instant;

use fertaper_core::dense;
use fertaper_core::Result;
use serde::Serialize;
use serde_json::Value;

use crate::config::VerificationLevel;

/// One verified claim. Discrete checks report the number of failures as the
/// residual and use tolerance zero.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub residual: f64,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub detail: Option<String>,
}

impl Check {
    /// Passes when `residual <= tolerance`; NaN fails.
    pub fn within(name: impl Into<String>, residual: f64, tolerance: f64) -> Check {
        // empty float sums are -0.0
        let residual = if residual == 0.0 { 0.0 } else { residual };
        Check {
            name: name.into(),
            passed: residual <= tolerance,
            residual,
            tolerance,
            detail: None,
        }
    }

    pub fn count(name: impl Into<String>, failures: usize) -> Check {
        Check::within(name, failures as f64, 0.0)
    }

    pub fn flag(name: impl Into<String>, ok: bool) -> Check {
        Check::count(name, usize::from(!ok))
    }

    /// Largest eigenvalue distance between two ascending spectra; a length
    /// mismatch fails with an infinite residual.
    pub fn spectra(name: impl Into<String>, a: &[f64], b: &[f64], tolerance: f64) -> Check {
        match dense::spectrum_distance(a, b) {
            Some(d) => Check::within(name, d, tolerance),
            None => Check::within(name, f64::INFINITY, tolerance).with_detail(format!(
                "{} eigenvalues against {}",
                a.len(),
                b.len()
            )),
        }
    }

    pub fn with_detail(mut self, detail: impl Into<String>) -> Check {
        self.detail = Some(detail.into());
        self
    }

    pub fn prefixed(mut self, prefix: &str) -> Check {
        self.name = format!("{prefix}/{}", self.name);
        self
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SectorEnergy {
    pub sector: String,
    pub qubits: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub ground_energy: Option<f64>,
}

/// Framed-diagonal counts: all terms, and the worst two- and four-body
/// observable.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct Sparsity {
    pub r: usize,
    pub r2: usize,
    pub r4: usize,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub seed: u64,
    pub verification: VerificationLevel,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qubits_before: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub qubits_after: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub terms: Option<usize>,
    /// Set when the Hamiltonian has no non-identity term.
    #[serde(skip_serializing_if = "std::ops::Not::not")]
    pub degenerate: bool,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub generators: Vec<String>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub paired_qubits: Vec<usize>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sectors: Vec<SectorEnergy>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sparsity: Option<Sparsity>,
    #[serde(skip_serializing_if = "BTreeMap::is_empty")]
    pub data: BTreeMap<String, Value>,
    pub checks: Vec<Check>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub timings_ms: Option<BTreeMap<String, f64>>,
}

#[derive(Serialize)]
struct Envelope<'a> {
    #[serde(flatten)]
    report: &'a RunReport,
    passed: bool,
}

impl RunReport {
    pub fn new(
        command: impl Into<String>,
        seed: u64,
        verification: VerificationLevel,
    ) -> RunReport {
        RunReport {
            command: command.into(),
            seed,
            verification,
            ..RunReport::default()
        }
    }

    /// Whether every recorded check passed (vacuously true with none).
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn push(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn set(&mut self, key: &str, value: impl Serialize) {
        let v = serde_json::to_value(value).expect("report data serializes");
        self.data.insert(key.to_string(), v);
    }

    pub fn to_json(&self) -> String {
        let env = Envelope {
            report: self,
            passed: self.passed(),
        };
        let mut s = serde_json::to_string_pretty(&env).expect("report serializes");
        s.push('\n');
        s
    }

    pub fn write(&self, path: impl AsRef<Path>) -> Result<()> {
        fertaper_core::write_file(path.as_ref(), self.to_json())
    }

    /// One `PASS`/`FAIL` line per check.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed { "PASS" } else { "FAIL" };
            out.push_str(&format!("{status} {} (residual {:e})", c.name, c.residual));
            if let Some(d) = &c.detail {
                out.push_str(&format!(": {d}"));
            }
            out.push('\n');
        }
        out
    }
}

/// Stage timings, recorded only when enabled so that reports stay
/// byte-identical across runs by default.
#[derive(Debug)]
pub struct Stopwatch {
    enabled: bool,
    stages: BTreeMap<String, f64>,
}

impl Stopwatch {
    pub fn new(enabled: bool) -> Stopwatch {
        Stopwatch {
            enabled,
            stages: BTreeMap::new(),
        }
    }

    pub fn time<T>(&mut self, stage: &str, f: impl FnOnce() -> T) -> T {
        let start = Instant::now();
        let out = f();
        if self.enabled {
            *self.stages.entry(stage.to_string()).or_default() +=
                start.elapsed().as_secs_f64() * 1e3;
        }
        out
    }

    pub fn finish(self, report: &mut RunReport) {
        if self.enabled {
            report.timings_ms = Some(self.stages);
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn nan_residual_fails() {
        assert!(!Check::within("x", f64::NAN, 1.0).passed);
        assert!(Check::within("x", 0.5, 1.0).passed);
        assert!(!Check::count("x", 1).passed);
    }

    #[test]
    fn spectra_length_mismatch_fails() {
        let c = Check::spectra("s", &[0.0], &[0.0, 1.0], 1e-9);
        assert!(!c.passed);
        assert!(c.detail.is_some());
    }

    #[test]
    fn json_carries_overall_status() {
        let mut r = RunReport::new("t", 1, VerificationLevel::Structural);
        r.push(Check::flag("ok", true));
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["passed"], Value::Bool(true));
        assert!(v.get("timings_ms").is_none());
        r.push(Check::flag("bad", false));
        let v: Value = serde_json::from_str(&r.to_json()).unwrap();
        assert_eq!(v["passed"], Value::Bool(false));
    }

    #[test]
    fn disabled_stopwatch_leaves_no_timings() {
        let mut r = RunReport::default();
        let mut w = Stopwatch::new(false);
        assert_eq!(w.time("a", || 3), 3);
        w.finish(&mut r);
        assert!(r.timings_ms.is_none());
        let mut w = Stopwatch::new(true);
        w.time("a", || ());
        w.finish(&mut r);
        assert!(r.timings_ms.unwrap().contains_key("a"));
    }
}
