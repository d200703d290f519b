//! Residual records emitted by the verification checks and suites.

use serde::Serialize;

/// One verified identity: the measured residual against its tolerance.
/// For violation witnesses the record passes when the residual *exceeds*
/// the stated floor; `params` carries `"kind": "violation-floor"` in that
/// case so reports stay self-describing.
#[derive(Debug, Clone, Serialize)]
pub struct ResidualRecord {
    pub identity: String,
    pub tau: Option<f64>,
    pub params: serde_json::Value,
    pub residual: f64,
    pub tolerance: f64,
    pub pass: bool,
}

impl ResidualRecord {
    /// A record passing when `residual <= tolerance`.
    pub fn bounded(
        identity: impl Into<String>,
        tau: Option<f64>,
        params: serde_json::Value,
        residual: f64,
        tolerance: f64,
    ) -> Self {
        Self {
            identity: identity.into(),
            tau,
            params,
            residual,
            tolerance,
            pass: residual.is_finite() && residual <= tolerance,
        }
    }

    /// A record passing when `residual > floor` (a violation witness).
    pub fn exceeds(
        identity: impl Into<String>,
        tau: Option<f64>,
        mut params: serde_json::Value,
        residual: f64,
        floor: f64,
    ) -> Self {
        if let serde_json::Value::Object(map) = &mut params {
            map.insert("kind".into(), serde_json::Value::String("violation-floor".into()));
        }
        Self {
            identity: identity.into(),
            tau,
            params,
            residual,
            tolerance: floor,
            pass: residual.is_finite() && residual > floor,
        }
    }
}

/// A full suite run: configuration echo plus individual records.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub suite: String,
    pub seed: u64,
    pub grid: crate::grid::GridSpec,
    pub records: Vec<ResidualRecord>,
    pub pass: bool,
}

impl SuiteReport {
    pub fn new(
        suite: impl Into<String>,
        seed: u64,
        grid: crate::grid::GridSpec,
        records: Vec<ResidualRecord>,
    ) -> Self {
        let pass = records.iter().all(|r| r.pass);
        Self { suite: suite.into(), seed, grid, records, pass }
    }
}
