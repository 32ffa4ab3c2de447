//! Machine-readable reports emitted by the scenario runner and gallery.

use serde::Serialize;

use crate::sweep::PositivityReport;

pub const REPORT_SCHEMA: u32 = 1;

#[derive(Clone, Debug, Serialize)]
pub struct Report {
    pub schema: u32,
    pub name: String,
    pub recipe: String,
    pub overall_pass: bool,
    pub checks: Vec<CheckEntry>,
    pub provenance: Provenance,
}

#[derive(Clone, Debug, Serialize)]
pub struct CheckEntry {
    pub name: String,
    pub kind: String,
    pub passed: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub min_value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub argmin: Option<Vec<f64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub value: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub expected: Option<f64>,
    pub tolerance: f64,
    #[serde(skip_serializing_if = "String::is_empty")]
    pub note: String,
}

#[derive(Clone, Debug, Serialize)]
pub struct Provenance {
    pub resolutions: Vec<usize>,
    pub tolerance: f64,
    pub resolution_scale: f64,
    pub parameters: serde_json::Value,
    pub wall_time_ms: u128,
}

impl CheckEntry {
    pub fn positivity(name: impl Into<String>, r: &PositivityReport) -> Self {
        CheckEntry {
            name: name.into(),
            kind: "positivity".into(),
            passed: r.passed,
            min_value: Some(r.min_value),
            argmin: Some(r.argmin.clone()),
            residual: None,
            value: None,
            expected: None,
            tolerance: r.tolerance,
            note: r.note.clone(),
        }
    }

    pub fn residual(name: impl Into<String>, residual: f64, tol: f64) -> Self {
        CheckEntry {
            name: name.into(),
            kind: "residual".into(),
            passed: residual <= tol,
            min_value: None,
            argmin: None,
            residual: Some(residual),
            value: None,
            expected: None,
            tolerance: tol,
            note: String::new(),
        }
    }

    pub fn value(name: impl Into<String>, value: f64, expected: f64, tol: f64) -> Self {
        CheckEntry {
            name: name.into(),
            kind: "value".into(),
            passed: (value - expected).abs() <= tol,
            min_value: None,
            argmin: None,
            residual: None,
            value: Some(value),
            expected: Some(expected),
            tolerance: tol,
            note: String::new(),
        }
    }

    pub fn flag(name: impl Into<String>, passed: bool, note: impl Into<String>) -> Self {
        CheckEntry {
            name: name.into(),
            kind: "flag".into(),
            passed,
            min_value: None,
            argmin: None,
            residual: None,
            value: None,
            expected: None,
            tolerance: 0.0,
            note: note.into(),
        }
    }

    pub fn failure(name: impl Into<String>, err: &crate::error::Error) -> Self {
        CheckEntry {
            name: name.into(),
            kind: "error".into(),
            passed: false,
            min_value: None,
            argmin: None,
            residual: None,
            value: None,
            expected: None,
            tolerance: 0.0,
            note: err.to_string(),
        }
    }

    pub fn with_note(mut self, note: impl Into<String>) -> Self {
        self.note = note.into();
        self
    }
}

impl Report {
    pub fn new(
        name: impl Into<String>,
        recipe: impl Into<String>,
        checks: Vec<CheckEntry>,
        provenance: Provenance,
    ) -> Self {
        let overall_pass = !checks.is_empty() && checks.iter().all(|c| c.passed);
        Report {
            schema: REPORT_SCHEMA,
            name: name.into(),
            recipe: recipe.into(),
            overall_pass,
            checks,
            provenance,
        }
    }

    pub fn check(&self, name: &str) -> Option<&CheckEntry> {
        self.checks.iter().find(|c| c.name == name)
    }

    /// Human-readable one-line-per-check summary.
    pub fn summary(&self) -> String {
        let mut out = String::new();
        for c in &self.checks {
            let status = if c.passed { "pass" } else { "FAIL" };
            let detail = if let Some(m) = c.min_value {
                format!("min {m:.6e}")
            } else if let Some(r) = c.residual {
                format!("residual {r:.3e} (tol {:.1e})", c.tolerance)
            } else if let Some(v) = c.value {
                format!(
                    "value {v:.6} (expected {:.6} +- {:.1e})",
                    c.expected.unwrap_or(f64::NAN),
                    c.tolerance
                )
            } else {
                c.note.clone()
            };
            out.push_str(&format!("[{status}] {:<32} {detail}\n", c.name));
        }
        out.push_str(&format!(
            "overall: {} ({} checks, {} ms)\n",
            if self.overall_pass { "pass" } else { "FAIL" },
            self.checks.len(),
            self.provenance.wall_time_ms
        ));
        out
    }
}
