use serde::{Deserialize, Serialize};

use crate::seqops::BoundKind;

use super::checks::{Bound, CheckSpec};
use super::Scenario;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoundsRecord {
    pub check: String,
    pub kind: BoundKind,
    pub alpha: f64,
    pub beta: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckRecord {
    pub name: String,
    /// `None` when the check could not be evaluated.
    pub value: Option<f64>,
    pub bound: Bound,
    pub tolerance: f64,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub target: Option<f64>,
    pub pass: bool,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrajectoryRecord {
    pub probe: String,
    pub points: Vec<(usize, Option<f64>)>,
}

impl TrajectoryRecord {
    /// `N,value` rows with a header; failed points are left empty.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("N,value\n");
        for (n, v) in &self.points {
            match v {
                Some(x) => out.push_str(&format!("{n},{x:e}\n")),
                None => out.push_str(&format!("{n},\n")),
            }
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ScenarioReport {
    pub schema_version: u32,
    pub tool_version: String,
    pub scenario: String,
    pub seed: u64,
    pub tolerance_scale: f64,
    pub pass: bool,
    pub checks: Vec<CheckRecord>,
    pub bounds: Vec<BoundsRecord>,
    pub trajectories: Vec<TrajectoryRecord>,
    pub notes: Vec<String>,
    pub wall_clock_seconds: f64,
}

impl ScenarioReport {
    pub fn new(scenario: &Scenario, tolerance_scale: f64) -> Self {
        Self {
            schema_version: SCHEMA_VERSION,
            tool_version: env!("CARGO_PKG_VERSION").to_string(),
            scenario: scenario.name.clone(),
            seed: scenario.seed,
            tolerance_scale,
            pass: false,
            checks: Vec::new(),
            bounds: Vec::new(),
            trajectories: Vec::new(),
            notes: Vec::new(),
            wall_clock_seconds: 0.0,
        }
    }

    fn record(spec: &CheckSpec, value: Option<f64>, pass: bool, note: Option<String>) -> CheckRecord {
        CheckRecord {
            name: spec.check.name().to_string(),
            value,
            bound: spec.bound(),
            tolerance: spec.tolerance(),
            target: spec.target,
            pass,
            note,
        }
    }

    pub fn push_check(&mut self, spec: &CheckSpec, value: Result<f64, String>, scale: f64) {
        let rec = match value {
            Ok(v) => {
                let pass = spec.bound().accepts(v, spec.tolerance(), spec.target(), scale);
                Self::record(spec, Some(v), pass, None)
            }
            Err(e) => Self::record(spec, None, false, Some(e)),
        };
        self.checks.push(rec);
    }

    /// Judge every point of a trajectory; the check record carries the last value.
    pub fn push_trajectory(&mut self, spec: &CheckSpec, points: Vec<(usize, Result<f64, String>)>, scale: f64) {
        let bound = spec.bound();
        let mut pass = true;
        let mut notes = Vec::new();
        let mut prev: Option<f64> = None;
        for (n, v) in &points {
            match v {
                Ok(x) => {
                    let ok = match bound {
                        Bound::Decreasing => x.is_finite() && prev.map_or(true, |p| *x < p),
                        b => b.accepts(*x, spec.tolerance(), spec.target(), scale),
                    };
                    if !ok {
                        pass = false;
                        notes.push(format!("N={n}: {x:e}"));
                    }
                    prev = Some(*x);
                }
                Err(e) => {
                    pass = false;
                    notes.push(format!("N={n}: {e}"));
                }
            }
        }
        let last = points.last().and_then(|(_, v)| v.as_ref().ok().copied());
        let note = if notes.is_empty() {
            Some(format!("trajectory over {} sizes", points.len()))
        } else {
            Some(format!("failing sizes: {}", notes.join("; ")))
        };
        self.checks.push(Self::record(spec, last, pass, note));
        self.trajectories.push(TrajectoryRecord {
            probe: spec.check.name().to_string(),
            points: points.into_iter().map(|(n, v)| (n, v.ok())).collect(),
        });
    }

    pub fn finish(&mut self, seconds: f64) {
        self.pass = self.checks.iter().all(|c| c.pass);
        self.wall_clock_seconds = seconds;
    }

    pub fn check(&self, name: &str) -> Option<&CheckRecord> {
        self.checks.iter().find(|c| c.name == name)
    }

    pub fn to_json_pretty(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}
