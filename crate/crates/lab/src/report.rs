use crate::config::{Suite, SuiteConfig};
use crate::LabError;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::collections::BTreeMap;
use std::path::Path;

pub const SCHEMA_VERSION: u32 = 1;

/// How `residual` is compared with `tolerance`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bound {
    AtMost,
    AtLeast,
    /// Passes when the check is expected to fail and does: the residual must
    /// exceed the tolerance.
    Exceeds,
    /// Recorded for the reader, never gates the run.
    Diagnostic,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Record {
    pub name: String,
    pub grid: String,
    pub inputs_digest: String,
    pub value: Option<f64>,
    /// `None` when the computation produced a non-finite number.
    pub residual: Option<f64>,
    pub tolerance: Option<f64>,
    pub bound: Bound,
    pub order: Option<f64>,
    pub pass: bool,
}

impl Record {
    pub fn check(name: impl Into<String>, grid: impl Into<String>, inputs: &serde_json::Value) -> RecordBuilder {
        let name = name.into();
        let digest = digest(&serde_json::json!({ "check": name, "inputs": inputs }));
        RecordBuilder { name, grid: grid.into(), digest, value: None, order: None }
    }

    pub fn gates(&self) -> bool {
        self.bound != Bound::Diagnostic
    }
}

pub struct RecordBuilder {
    name: String,
    grid: String,
    digest: String,
    value: Option<f64>,
    order: Option<f64>,
}

impl RecordBuilder {
    pub fn value(mut self, v: f64) -> Self {
        self.value = finite(v);
        self
    }

    pub fn order(mut self, q: f64) -> Self {
        self.order = finite(q);
        self
    }

    fn finish(self, residual: f64, tolerance: Option<f64>, bound: Bound, pass: bool) -> Record {
        let residual = finite(residual);
        Record {
            name: self.name,
            grid: self.grid,
            inputs_digest: self.digest,
            value: self.value,
            pass: pass && residual.is_some(),
            residual,
            tolerance,
            bound,
            order: self.order,
        }
    }

    pub fn at_most(self, residual: f64, tolerance: f64) -> Record {
        self.finish(residual, Some(tolerance), Bound::AtMost, residual <= tolerance)
    }

    pub fn at_least(self, residual: f64, tolerance: f64) -> Record {
        self.finish(residual, Some(tolerance), Bound::AtLeast, residual >= tolerance)
    }

    pub fn exceeds(self, residual: f64, tolerance: f64) -> Record {
        self.finish(residual, Some(tolerance), Bound::Exceeds, residual > tolerance)
    }

    /// A yes/no check; `residual` is 0 on success and 1 otherwise.
    pub fn holds(self, ok: bool) -> Record {
        self.finish(if ok { 0.0 } else { 1.0 }, Some(0.0), Bound::AtMost, ok)
    }

    pub fn diagnostic(self, residual: f64, pass: bool) -> Record {
        self.finish(residual, None, Bound::Diagnostic, pass)
    }
}

fn finite(v: f64) -> Option<f64> {
    v.is_finite().then_some(v)
}

/// Lowercase hex SHA-256 of the compact JSON text of `v`.
pub fn digest(v: &serde_json::Value) -> String {
    hex::encode(Sha256::digest(v.to_string().as_bytes()))
}

/// Build facts that can change results. Thread count is left out: every
/// reduction sums in index order.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Environment {
    pub package: String,
    pub version: String,
    pub os: String,
    pub arch: String,
    pub debug_assertions: bool,
}

impl Environment {
    pub fn current() -> Self {
        Environment {
            package: env!("CARGO_PKG_NAME").into(),
            version: env!("CARGO_PKG_VERSION").into(),
            os: std::env::consts::OS.into(),
            arch: std::env::consts::ARCH.into(),
            debug_assertions: cfg!(debug_assertions),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunReport {
    pub schema_version: u32,
    pub suite: Suite,
    pub config: SuiteConfig,
    pub environment: Environment,
    pub records: Vec<Record>,
    /// Certificates produced by the symbolic suite, by name.
    pub certificates: BTreeMap<String, serde_json::Value>,
    pub pass: bool,
}

impl RunReport {
    pub fn new(config: SuiteConfig, records: Vec<Record>, certificates: BTreeMap<String, serde_json::Value>) -> Self {
        let pass = records.iter().filter(|r| r.gates()).all(|r| r.pass);
        RunReport {
            schema_version: SCHEMA_VERSION,
            suite: config.suite,
            config,
            environment: Environment::current(),
            records,
            certificates,
            pass,
        }
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report is plain data") + "\n"
    }

    pub fn failures(&self) -> impl Iterator<Item = &Record> {
        self.records.iter().filter(|r| r.gates() && !r.pass)
    }

    pub fn record(&self, name: &str) -> Option<&Record> {
        self.records.iter().find(|r| r.name == name)
    }

    /// Columns `grid, check, value, residual, order`.
    pub fn write_csv(&self, path: &Path) -> Result<(), LabError> {
        let cell = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
        let mut w = csv::Writer::from_path(path).map_err(|e| LabError::Io(format!("{}: {e}", path.display())))?;
        let io = |e: csv::Error| LabError::Io(e.to_string());
        w.write_record(["grid", "check", "value", "residual", "order"]).map_err(io)?;
        for r in &self.records {
            w.write_record([r.grid.clone(), r.name.clone(), cell(r.value), cell(r.residual), cell(r.order)])
                .map_err(io)?;
        }
        w.flush().map_err(|e| LabError::Io(e.to_string()))
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use serde_json::json;

    #[test]
    fn digest_depends_on_inputs() {
        let a = Record::check("x", "", &json!({"seed": 1})).at_most(0.0, 1.0);
        let b = Record::check("x", "", &json!({"seed": 2})).at_most(0.0, 1.0);
        assert_ne!(a.inputs_digest, b.inputs_digest);
        assert_eq!(a.inputs_digest.len(), 64);
    }

    #[test]
    fn diagnostics_do_not_gate() {
        let recs = vec![
            Record::check("ok", "", &json!({})).at_most(1.0, 2.0),
            Record::check("info", "", &json!({})).diagnostic(5.0, false),
        ];
        assert!(RunReport::new(SuiteConfig::default(), recs.clone(), BTreeMap::new()).pass);
        let mut bad = recs;
        bad.push(Record::check("order", "", &json!({})).at_least(1.0, 1.8));
        let r = RunReport::new(SuiteConfig::default(), bad, BTreeMap::new());
        assert!(!r.pass);
        assert_eq!(r.failures().count(), 1);
    }

    #[test]
    fn exceeds_passes_on_detected_failure() {
        assert!(Record::check("m", "", &json!({})).exceeds(0.5, 1e-10).pass);
        assert!(!Record::check("m", "", &json!({})).exceeds(0.0, 1e-10).pass);
    }
}
