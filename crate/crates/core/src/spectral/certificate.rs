//! Certificates: ordered lists of named numeric checks with a stable JSON form.

use std::fmt::Write as _;

use serde::{Deserialize, Serialize};

use crate::error::{QidError, Result};
use crate::model::ModelParams;

/// Where a check attained its largest violation.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Witness {
    Point(f64),
    Pair([f64; 2]),
}

/// One named check. `pass` is always `max_violation <= tolerance`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Check {
    pub name: String,
    pub tolerance: f64,
    pub max_violation: f64,
    pub witness: Witness,
    pub pass: bool,
}

impl Check {
    /// Non-finite numbers are stored as `±f64::MAX` (NaN as `+f64::MAX`) so
    /// that every certificate is representable in JSON.
    pub fn new(name: impl Into<String>, tolerance: f64, max_violation: f64, witness: Witness) -> Self {
        let max_violation = finite(max_violation);
        let witness = match witness {
            Witness::Point(x) => Witness::Point(finite(x)),
            Witness::Pair([a, b]) => Witness::Pair([finite(a), finite(b)]),
        };
        Check { name: name.into(), tolerance, max_violation, witness, pass: max_violation <= tolerance }
    }

    /// Check that errored before producing a value.
    pub fn failed(name: impl Into<String>, tolerance: f64) -> Self {
        Self::new(name, tolerance, f64::MAX, Witness::Point(0.0))
    }

    /// Runs `f`, turning an error into a failed check.
    pub fn run<F: FnOnce() -> Result<(f64, Witness)>>(name: &str, tolerance: f64, f: F) -> Self {
        match f() {
            Ok((v, w)) => Self::new(name, tolerance, v, w),
            Err(_) => Self::failed(name, tolerance),
        }
    }
}

fn finite(x: f64) -> f64 {
    if x.is_nan() {
        f64::MAX
    } else {
        x.clamp(f64::MIN, f64::MAX)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificateParams {
    pub n: u32,
    pub delta: f64,
}

impl From<&ModelParams> for CertificateParams {
    fn from(p: &ModelParams) -> Self {
        CertificateParams { n: p.n(), delta: p.delta() }
    }
}

/// Settings that, with the parameters, determine the certificate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CertificateConfig {
    pub abs_tol: f64,
    pub seed: u64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub params: CertificateParams,
    pub config: CertificateConfig,
    pub checks: Vec<Check>,
    pub all_pass: bool,
    pub version: String,
}

impl Certificate {
    pub fn new(params: &ModelParams, config: CertificateConfig, checks: Vec<Check>) -> Self {
        let all_pass = checks.iter().all(|c| c.pass);
        Certificate { params: params.into(), config, checks, all_pass, version: env!("CARGO_PKG_VERSION").to_string() }
    }

    /// Appends the checks of `other` (same parameters assumed).
    pub fn extend(&mut self, other: Certificate) {
        self.checks.extend(other.checks);
        self.all_pass = self.checks.iter().all(|c| c.pass);
    }

    pub fn check(&self, name: &str) -> Option<&Check> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.pass)
    }

    /// JSON with fixed field order and 17 significant digits per float.
    pub fn to_json(&self) -> String {
        let mut s = String::new();
        s.push_str("{\n");
        let _ = writeln!(s, "  \"params\": {{\"n\": {}, \"delta\": {}}},", self.params.n, float(self.params.delta));
        let _ = writeln!(
            s,
            "  \"config\": {{\"abs_tol\": {}, \"seed\": {}}},",
            float(self.config.abs_tol),
            self.config.seed
        );
        s.push_str("  \"checks\": [");
        for (i, c) in self.checks.iter().enumerate() {
            s.push_str(if i == 0 { "\n" } else { ",\n" });
            let witness = match c.witness {
                Witness::Point(x) => float(x),
                Witness::Pair([a, b]) => format!("[{}, {}]", float(a), float(b)),
            };
            let _ = write!(
                s,
                "    {{\"name\": {}, \"tolerance\": {}, \"max_violation\": {}, \"witness\": {}, \"pass\": {}}}",
                string(&c.name),
                float(c.tolerance),
                float(c.max_violation),
                witness,
                c.pass
            );
        }
        s.push_str(if self.checks.is_empty() { "],\n" } else { "\n  ],\n" });
        let _ = writeln!(s, "  \"all_pass\": {},", self.all_pass);
        let _ = writeln!(s, "  \"version\": {}", string(&self.version));
        s.push_str("}\n");
        s
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| QidError::DomainError(format!("bad certificate JSON: {e}")))
    }
}

fn float(x: f64) -> String {
    format!("{x:.16e}")
}

fn string(s: &str) -> String {
    serde_json::to_string(s).expect("strings always serialize")
}
