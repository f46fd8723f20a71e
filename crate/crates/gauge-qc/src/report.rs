//! Structured run reports: deterministic JSON with fixed field order and
//! 17-significant-digit float formatting, plus per-check pass/fail lines.

use serde_json::{Map, Number, Value};
use sha2::{Digest, Sha256};

use crate::linalg::{ComplexMatrix, StateVector};

/// A float rendered with 17 significant digits so identical inputs yield
/// byte-identical reports.
pub fn num(x: f64) -> Value {
    let text = format!("{x:.16e}");
    Value::Number(serde_json::from_str::<Number>(&text).expect("formatted float is a JSON number"))
}

pub fn complex(re: f64, im: f64) -> Value {
    Value::Array(vec![num(re), num(im)])
}

pub fn matrix(m: &ComplexMatrix) -> Value {
    Value::Array(
        (0..m.rows())
            .map(|r| {
                Value::Array(
                    (0..m.cols())
                        .map(|c| {
                            let z = m.get(r, c);
                            complex(z.re, z.im)
                        })
                        .collect(),
                )
            })
            .collect(),
    )
}

pub fn vector(v: &StateVector) -> Value {
    Value::Array(v.amplitudes().iter().map(|z| complex(z.re, z.im)).collect())
}

/// SHA-256 hex digest used to echo inputs.
pub fn digest(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    hasher
        .finalize()
        .iter()
        .map(|b| format!("{b:02x}"))
        .collect()
}

/// One numeric check: passes iff the observed deviation is within tolerance.
#[derive(Debug, Clone)]
pub struct Check {
    pub name: String,
    pub deviation: f64,
    pub tolerance: f64,
}

impl Check {
    pub fn new(name: impl Into<String>, deviation: f64, tolerance: f64) -> Self {
        Self {
            name: name.into(),
            deviation,
            tolerance,
        }
    }

    pub fn passed(&self) -> bool {
        self.deviation.is_finite() && self.deviation <= self.tolerance
    }
}

/// Assembles the report JSON in a fixed field order.
pub struct RunReport {
    command: String,
    inputs: Map<String, Value>,
    results: Map<String, Value>,
    checks: Vec<Check>,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> Self {
        Self {
            command: command.into(),
            inputs: Map::new(),
            results: Map::new(),
            checks: Vec::new(),
        }
    }

    pub fn input(&mut self, key: impl Into<String>, value: Value) {
        self.inputs.insert(key.into(), value);
    }

    pub fn result(&mut self, key: impl Into<String>, value: Value) {
        self.results.insert(key.into(), value);
    }

    pub fn check(&mut self, check: Check) {
        self.checks.push(check);
    }

    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(Check::passed)
    }

    pub fn max_deviation(&self) -> f64 {
        self.checks.iter().map(|c| c.deviation).fold(0.0, f64::max)
    }

    /// Finish the report. Wall time is reported on the stderr summary only:
    /// the machine-readable JSON must be byte-identical across runs with
    /// identical inputs.
    pub fn finish(&self) -> Value {
        let mut root = Map::new();
        root.insert("command".into(), Value::String(self.command.clone()));
        root.insert("inputs".into(), Value::Object(self.inputs.clone()));
        root.insert("results".into(), Value::Object(self.results.clone()));
        root.insert(
            "checks".into(),
            Value::Array(
                self.checks
                    .iter()
                    .map(|c| {
                        let mut m = Map::new();
                        m.insert("name".into(), Value::String(c.name.clone()));
                        m.insert("pass".into(), Value::Bool(c.passed()));
                        m.insert("deviation".into(), num(c.deviation));
                        m.insert("tolerance".into(), num(c.tolerance));
                        Value::Object(m)
                    })
                    .collect(),
            ),
        );
        root.insert(
            "status".into(),
            Value::String(if self.all_passed() { "pass" } else { "fail" }.into()),
        );
        root.insert("max_deviation".into(), num(self.max_deviation()));
        Value::Object(root)
    }

    /// Human-readable per-check lines for standard error.
    pub fn summary(&self, wall_time_s: f64) -> String {
        let mut out = String::new();
        for c in &self.checks {
            out.push_str(&format!(
                "{} {}: deviation {:.3e} (tolerance {:.1e})\n",
                if c.passed() { "PASS" } else { "FAIL" },
                c.name,
                c.deviation,
                c.tolerance
            ));
        }
        out.push_str(&format!(
            "{}: {}/{} checks passed in {:.3}s\n",
            if self.all_passed() { "OK" } else { "FAILED" },
            self.checks.iter().filter(|c| c.passed()).count(),
            self.checks.len(),
            wall_time_s
        ));
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn num_has_17_significant_digits() {
        assert_eq!(num(0.5).to_string(), "5.0000000000000000e-1");
        assert_eq!(num(1.0).to_string(), "1.0000000000000000e+0");
    }

    #[test]
    fn report_field_order_is_fixed() {
        let mut r = RunReport::new("test");
        r.result("b", num(1.0));
        r.result("a", num(2.0));
        r.check(Check::new("c1", 0.0, 1e-10));
        let v = r.finish();
        let text = serde_json::to_string(&v).unwrap();
        assert!(text.starts_with(r#"{"command":"test""#));
        // Insertion order is preserved within sections.
        assert!(text.find("\"b\"").unwrap() < text.find("\"a\"").unwrap());
    }

    #[test]
    fn check_pass_logic() {
        assert!(Check::new("x", 1e-12, 1e-10).passed());
        assert!(!Check::new("x", 1e-9, 1e-10).passed());
        assert!(!Check::new("x", f64::NAN, 1e-10).passed());
    }

    #[test]
    fn digest_is_stable() {
        assert_eq!(
            digest(b"abc"),
            "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad"
        );
    }
}
