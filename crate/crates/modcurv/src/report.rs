//! Residual reports shared by the relation suites and the CLI.

use serde::{Deserialize, Serialize};
use std::collections::BTreeMap;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PointResidual {
    pub point: Vec<f64>,
    pub residual: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RelationReport {
    pub relation_id: String,
    pub grid_spec: String,
    pub max_abs_residual: f64,
    pub tolerance: f64,
    pub passed: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub fitted_constants: Option<BTreeMap<String, f64>>,
    #[serde(default)]
    pub points: Vec<PointResidual>,
}

impl RelationReport {
    /// Builds a report from per-point residuals. Non-finite residuals are
    /// stored as `f64::MAX` so the report survives a JSON round trip.
    pub fn from_points(
        id: impl Into<String>,
        grid_spec: impl Into<String>,
        tolerance: f64,
        mut points: Vec<PointResidual>,
    ) -> Self {
        for p in &mut points {
            if !p.residual.is_finite() {
                p.residual = f64::MAX;
            }
        }
        let max = points.iter().map(|p| p.residual).fold(0.0, f64::max);
        RelationReport {
            relation_id: id.into(),
            grid_spec: grid_spec.into(),
            max_abs_residual: max,
            tolerance,
            passed: max <= tolerance,
            fitted_constants: None,
            points,
        }
    }

    /// A report for a failure that produced no residuals at all.
    pub fn failed(id: impl Into<String>, grid_spec: impl Into<String>, tolerance: f64, why: &str) -> Self {
        let mut r = Self::from_points(id, grid_spec, tolerance, Vec::new());
        r.max_abs_residual = f64::MAX;
        r.passed = false;
        r.grid_spec = format!("{} (error: {why})", r.grid_spec);
        r
    }

    pub fn with_constants(mut self, c: BTreeMap<String, f64>) -> Self {
        self.fitted_constants = Some(c);
        self
    }
}
