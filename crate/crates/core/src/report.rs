//! Structured residual reports shared by every suite.

use serde::{Deserialize, Serialize};
use std::time::Instant;

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Case {
    pub id: String,
    pub residual: f64,
    pub tol: f64,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "String::is_empty")]
    pub notes: String,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ResidualReport {
    pub suite: String,
    pub cases: Vec<Case>,
    pub config: serde_json::Value,
    /// Truncation or resampling notices that do not fail the suite.
    pub warnings: Vec<String>,
    pub wall_time_s: f64,
}

impl ResidualReport {
    pub fn new(suite: impl Into<String>) -> Self {
        ResidualReport {
            suite: suite.into(),
            cases: Vec::new(),
            config: serde_json::Value::Null,
            warnings: Vec::new(),
            wall_time_s: 0.0,
        }
    }

    /// Record a numeric case; NaN residuals fail.
    pub fn push(&mut self, id: impl Into<String>, residual: f64, tol: f64, notes: impl Into<String>) {
        let pass = residual <= tol;
        self.cases.push(Case { id: id.into(), residual, tol, pass, notes: notes.into() });
    }

    /// Record an exact case: `nonzero_terms` is the size of the normalized residual.
    pub fn push_exact(&mut self, id: impl Into<String>, nonzero_terms: usize) {
        let notes = if nonzero_terms == 0 { String::new() } else { format!("{nonzero_terms} residual terms") };
        self.push(id, nonzero_terms as f64, 0.0, notes);
    }

    pub fn push_error(&mut self, id: impl Into<String>, err: impl std::fmt::Display) {
        self.cases.push(Case { id: id.into(), residual: f64::INFINITY, tol: 0.0, pass: false, notes: err.to_string() });
    }

    pub fn pass(&self) -> bool {
        !self.cases.is_empty() && self.cases.iter().all(|c| c.pass)
    }

    pub fn max_residual(&self) -> f64 {
        self.cases.iter().map(|c| c.residual).fold(0.0, f64::max)
    }

    pub fn failures(&self) -> Vec<&Case> {
        self.cases.iter().filter(|c| !c.pass).collect()
    }

    pub fn extend(&mut self, other: ResidualReport) {
        let prefix = other.suite.clone();
        for mut c in other.cases {
            c.id = format!("{prefix}/{}", c.id);
            self.cases.push(c);
        }
        self.warnings.extend(other.warnings);
    }

    pub fn with_config(mut self, cfg: serde_json::Value) -> Self {
        self.config = cfg;
        self
    }

    pub fn timed(mut self, start: Instant) -> Self {
        self.wall_time_s = start.elapsed().as_secs_f64();
        self
    }

    /// Multiply every tolerance by `factor` and recompute pass flags.
    pub fn loosen(&mut self, factor: f64) {
        for c in &mut self.cases {
            c.tol *= factor;
            c.pass = c.residual <= c.tol;
        }
    }
}

/// Relative residual `|a − b| / max(|a|, |b|, floor)`.
pub fn rel_residual(a: num_complex::Complex64, b: num_complex::Complex64, floor: f64) -> f64 {
    (a - b).norm() / a.norm().max(b.norm()).max(floor)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn pass_iff_all_within_tolerance() {
        let mut r = ResidualReport::new("t");
        assert!(!r.pass());
        r.push("a", 1e-12, 1e-10, "");
        r.push_exact("b", 0);
        assert!(r.pass());
        r.push("c", f64::NAN, 1.0, "");
        assert!(!r.pass());
        assert_eq!(r.failures().len(), 1);
    }
}
