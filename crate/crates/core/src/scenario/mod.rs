//! Declarative scenarios: a construction, an operator and a list of checks,
//! evaluated into a [`ScenarioReport`].

mod bundled;
mod checks;
mod report;
mod setting;

use serde::{Deserialize, Serialize};

use crate::error::FrameError;

pub use bundled::{bundled, bundled_entries, bundled_names, BundledScenario, SCHEMA};
pub use checks::{Bound, CheckName, CheckSpec, Normalize};
pub use report::{BoundsRecord, CheckRecord, ScenarioReport, TrajectoryRecord, SCHEMA_VERSION};
pub use setting::{CellProfile, Construction, GridKind, LabelSpec, MotherKind, OperatorSpec, Setting, WindowKind};

/// Environment variable holding a positive factor applied to every tolerance.
pub const TOL_OVERRIDE_VAR: &str = "OPFRAME_TOL_OVERRIDE";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    #[serde(default)]
    pub description: String,
    #[serde(default)]
    pub seed: u64,
    pub construction: Construction,
    #[serde(default)]
    pub operator: OperatorSpec,
    pub checks: Vec<CheckSpec>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sizes: Option<Vec<usize>>,
}

/// Why a scenario could not be run to completion.
#[derive(Debug, thiserror::Error)]
pub enum ScenarioError {
    #[error("invalid scenario: {0}")]
    Invalid(String),
    #[error("scenario failed internally: {0}")]
    Internal(String),
}

impl ScenarioError {
    /// Process exit code: 2 for unusable input, 3 for internal failures.
    pub fn exit_code(&self) -> i32 {
        match self {
            ScenarioError::Invalid(_) => 2,
            ScenarioError::Internal(_) => 3,
        }
    }
}

impl From<FrameError> for ScenarioError {
    fn from(e: FrameError) -> Self {
        ScenarioError::Internal(e.to_string())
    }
}

impl Scenario {
    pub fn from_json(text: &str) -> Result<Self, ScenarioError> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| ScenarioError::Invalid(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        if self.name.trim().is_empty() {
            return Err(ScenarioError::Invalid("scenario name is empty".into()));
        }
        if self.checks.is_empty() {
            return Err(ScenarioError::Invalid("scenario lists no checks".into()));
        }
        for c in &self.checks {
            c.validate().map_err(ScenarioError::Invalid)?;
            if c.over_sizes && self.sizes.as_ref().map_or(true, |s| s.is_empty()) {
                return Err(ScenarioError::Invalid(format!(
                    "check `{}` runs over sizes but the scenario lists none",
                    c.check.name()
                )));
            }
        }
        if let Some(sizes) = &self.sizes {
            if sizes.windows(2).any(|w| w[0] >= w[1]) || sizes.first() == Some(&0) {
                return Err(ScenarioError::Invalid("sizes must be positive and increasing".into()));
            }
        }
        self.construction.validate().map_err(ScenarioError::Invalid)?;
        self.operator.validate_for(&self.construction).map_err(ScenarioError::Invalid)?;
        Ok(())
    }
}

/// Tolerance factor from [`TOL_OVERRIDE_VAR`]; `Ok(1.0)` when unset.
pub fn tolerance_scale_from_env() -> Result<f64, ScenarioError> {
    match std::env::var(TOL_OVERRIDE_VAR) {
        Err(_) => Ok(1.0),
        Ok(v) => match v.trim().parse::<f64>() {
            Ok(x) if x > 0.0 && x.is_finite() => Ok(x),
            _ => Err(ScenarioError::Invalid(format!("{TOL_OVERRIDE_VAR}={v} is not a positive number"))),
        },
    }
}

#[cfg(not(target_arch = "wasm32"))]
fn stopwatch() -> impl FnOnce() -> f64 {
    let t = std::time::Instant::now();
    move || t.elapsed().as_secs_f64()
}

/// The browser has no monotonic clock through `std`; callers time the run.
#[cfg(target_arch = "wasm32")]
fn stopwatch() -> impl FnOnce() -> f64 {
    || 0.0
}

/// Run every check of `scenario`. `tol_scale` multiplies upper tolerances
/// and divides lower thresholds.
pub fn run(scenario: &Scenario, tol_scale: f64) -> Result<ScenarioReport, ScenarioError> {
    let elapsed = stopwatch();
    let mut report = ScenarioReport::new(scenario, tol_scale);
    let base = Setting::build(&scenario.construction, &scenario.operator, scenario.seed, None)?;
    report.notes.extend(base.notes.iter().cloned());
    for spec in &scenario.checks {
        if spec.over_sizes {
            let sizes = scenario.sizes.clone().unwrap_or_default();
            let mut points = Vec::with_capacity(sizes.len());
            for &n in &sizes {
                let s = Setting::build(&scenario.construction, &scenario.operator, scenario.seed, Some(n))?;
                let v = checks::evaluate(spec, &s, scenario.seed, &mut report.bounds);
                points.push((n, v.map(|x| spec.normalize.apply(x, n))));
            }
            report.push_trajectory(spec, points, tol_scale);
        } else {
            let v = checks::evaluate(spec, &base, scenario.seed, &mut report.bounds);
            report.push_check(spec, v, tol_scale);
        }
    }
    report.finish(elapsed());
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn unknown_check_is_invalid() {
        let text = r#"{"name":"x","construction":{"generator":"difference","d":4},
            "checks":[{"check":"no_such_check","tolerance":1}]}"#;
        assert!(matches!(Scenario::from_json(text), Err(ScenarioError::Invalid(_))));
    }

    #[test]
    fn negative_tolerance_is_invalid() {
        let text = r#"{"name":"x","construction":{"generator":"difference","d":4},
            "checks":[{"check":"partial_sum_identity","tolerance":-1}]}"#;
        assert!(matches!(Scenario::from_json(text), Err(ScenarioError::Invalid(_))));
    }

    #[test]
    fn small_difference_scenario_runs() {
        let text = r#"{"name":"diff","construction":{"generator":"difference","d":12},
            "checks":[{"check":"partial_sum_identity","tolerance":1e-12},
                      {"check":"strong_expansion","tolerance":0.5},
                      {"check":"weak_dual_residual","tolerance":1e-8}]}"#;
        let s = Scenario::from_json(text).unwrap();
        let r = run(&s, 1.0).unwrap();
        assert!(r.pass, "{:#?}", r.checks);
        assert_eq!(r.checks.len(), 3);
    }

    #[test]
    fn zero_tolerance_fails_discretized_check() {
        let text = r#"{"name":"exm1","construction":{"generator":"exponential","b":1.0,"cells":64,"labels":{"range":10}},
            "checks":[{"check":"weak_duality","tolerance":0}]}"#;
        let r = run(&Scenario::from_json(text).unwrap(), 1.0).unwrap();
        assert!(!r.pass);
        assert!(r.checks[0].value.unwrap() > 0.0);
    }

    #[test]
    fn trajectories_are_recorded() {
        let text = r#"{"name":"p","construction":{"generator":"parseval_diagonal"},
            "sizes":[4,8],
            "checks":[{"check":"weak_alpha","over_sizes":true,"bound":"equals","target":1,"tolerance":1e-10},
                      {"check":"bessel_bound","over_sizes":true,"normalize":"n2","bound":"equals","target":1,"tolerance":1e-12}]}"#;
        let r = run(&Scenario::from_json(text).unwrap(), 1.0).unwrap();
        assert!(r.pass, "{:#?}", r.checks);
        assert_eq!(r.trajectories.len(), 2);
        assert_eq!(r.trajectories[1].points.len(), 2);
    }
}
