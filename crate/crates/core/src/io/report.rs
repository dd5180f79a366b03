use std::collections::BTreeMap;
use std::fmt::Write as _;

use serde::Serialize;

use crate::paths::{IdentityCheck, MaslovResult};

/// Version string stamped on every report.
pub const VERSION: &str = concat!("maslov ", env!("CARGO_PKG_VERSION"));

/// An integer output and the distance of its real-valued source from it.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegerResult {
    pub value: i64,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct IdentityOutcome {
    pub name: String,
    pub lhs: i64,
    pub rhs: i64,
    pub pass: bool,
}

impl From<&IdentityCheck> for IdentityOutcome {
    fn from(c: &IdentityCheck) -> Self {
        Self { name: c.name.clone(), lhs: c.lhs, rhs: c.rhs, pass: c.holds() }
    }
}

/// Machine-readable result of one job. Maps are ordered, so serialization is
/// deterministic.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Report {
    pub version: String,
    pub command: String,
    pub seed: u64,
    pub inputs: serde_json::Value,
    pub integers: BTreeMap<String, IntegerResult>,
    pub diagnostics: BTreeMap<String, f64>,
    pub identities: Vec<IdentityOutcome>,
    pub notes: Vec<String>,
}

impl Report {
    pub fn new(command: &str, seed: u64, inputs: serde_json::Value) -> Self {
        Self {
            version: VERSION.to_string(),
            command: command.to_string(),
            seed,
            inputs,
            integers: BTreeMap::new(),
            diagnostics: BTreeMap::new(),
            identities: Vec::new(),
            notes: Vec::new(),
        }
    }

    pub fn integer(&mut self, name: impl Into<String>, value: i64, residual: f64) {
        self.integers.insert(name.into(), IntegerResult { value, residual });
    }

    /// Records an index together with its residual and refinement depth.
    pub fn maslov(&mut self, name: &str, m: &MaslovResult) {
        self.integer(name, m.index, m.residual);
        if m.refinement_depth > 0 {
            self.diagnostic(format!("{name}.refinement_depth"), m.refinement_depth as f64);
        }
    }

    pub fn diagnostic(&mut self, name: impl Into<String>, value: f64) {
        self.diagnostics.insert(name.into(), value);
    }

    pub fn identity(&mut self, check: &IdentityCheck) {
        self.identities.push(check.into());
    }

    pub fn note(&mut self, note: impl Into<String>) {
        self.notes.push(note.into());
    }

    pub fn passed(&self) -> bool {
        self.identities.iter().all(|i| i.pass)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize")
    }

    pub fn to_text(&self) -> String {
        let mut s = String::new();
        let _ = writeln!(s, "{} ({}, seed {})", self.command, self.version, self.seed);
        for (name, r) in &self.integers {
            let _ = writeln!(s, "  {name} = {} (residual {:.3e})", r.value, r.residual);
        }
        for (name, v) in &self.diagnostics {
            let _ = writeln!(s, "  {name}: {v:.6e}");
        }
        for i in &self.identities {
            let mark = if i.pass { "PASS" } else { "FAIL" };
            let _ = writeln!(s, "  [{mark}] {}: {} vs {}", i.name, i.lhs, i.rhs);
        }
        for n in &self.notes {
            let _ = writeln!(s, "  note: {n}");
        }
        let _ = writeln!(s, "{}", if self.passed() { "all identities hold" } else { "identity violated" });
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn serialization_is_ordered() {
        let mut a = Report::new("leray", 0, serde_json::json!({"b": 1, "a": 2}));
        a.integer("z", 1, 0.0);
        a.integer("a", 2, 1e-12);
        let text = a.to_json();
        assert!(text.find("\"a\"").unwrap() < text.find("\"z\"").unwrap());
        assert_eq!(text, a.clone().to_json());
        assert!(a.passed());
        a.identity(&IdentityCheck::new("x", 1, 2));
        assert!(!a.passed());
        assert!(a.to_text().contains("[FAIL] x: 1 vs 2"));
    }
}
