//! Browser bindings for the opframe toolkit.
//!
//! Every export takes plain numbers or JSON text and returns a scenario
//! report as JSON, so the page only has to render tables.

use opframe::scenario::{self, Scenario, ScenarioError};
use serde_json::{json, Value};
use wasm_bindgen::prelude::*;

fn run_value(spec: Value) -> Result<String, String> {
    let s: Scenario = serde_json::from_value(spec).map_err(|e| e.to_string())?;
    run(&s)
}

fn run(s: &Scenario) -> Result<String, String> {
    s.validate().map_err(|e| e.to_string())?;
    let report = scenario::run(s, 1.0).map_err(|e: ScenarioError| e.to_string())?;
    Ok(report.to_json_pretty())
}

fn report_check(name: &str) -> Value {
    json!({ "check": name, "bound": "report" })
}

const HALF_WIDTH: f64 = 4.0;
const GABOR_POINTS: usize = 64;

/// Frame bounds of the Gabor system `{M_{bn} T_{am} g}` on the periodic grid
/// `[-4, 4)` with 64 points; `m` and `n` run far enough to cover the grid in
/// time and the full discrete band in frequency.
pub fn gabor_bounds_json(window: &str, a: f64, b: f64) -> Result<String, String> {
    if !(a > 0.0 && b > 0.0) {
        return Err("a and b must be positive".into());
    }
    let nyquist = GABOR_POINTS as f64 / (4.0 * HALF_WIDTH);
    run_value(json!({
        "name": "gabor_bounds",
        "construction": {
            "generator": "gabor", "window": window, "a": a, "b": b,
            "m_range": (HALF_WIDTH / a).ceil() as usize, "n_range": (nyquist / b).ceil() as usize,
            "lo": -HALF_WIDTH, "hi": HALF_WIDTH, "points": GABOR_POINTS
        },
        "checks": [report_check("frame_alpha"), report_check("frame_beta"), report_check("frame_ratio")]
    }))
}

/// Weak A-frame bound and duality residuals of the exponential system `e^{ibnx}`.
pub fn exponential_weak_json(b: f64, range: usize, cells: usize) -> Result<String, String> {
    run_value(json!({
        "name": "exponential_weak",
        "construction": { "generator": "exponential", "b": b, "cells": cells, "labels": { "range": range } },
        "checks": [report_check("weak_alpha"), report_check("weak_duality"), report_check("adjoint_decomposition")]
    }))
}

pub fn scenario_json(text: &str) -> Result<String, String> {
    let s = Scenario::from_json(text).map_err(|e| e.to_string())?;
    run(&s)
}

#[wasm_bindgen]
pub fn gabor_bounds(window: &str, a: f64, b: f64) -> Result<String, JsValue> {
    gabor_bounds_json(window, a, b).map_err(|e| JsValue::from_str(&e))
}

#[wasm_bindgen]
pub fn exponential_weak(b: f64, range: usize, cells: usize) -> Result<String, JsValue> {
    exponential_weak_json(b, range, cells).map_err(|e| JsValue::from_str(&e))
}

/// Run a scenario given as JSON text.
#[wasm_bindgen]
pub fn run_scenario(text: &str) -> Result<String, JsValue> {
    scenario_json(text).map_err(|e| JsValue::from_str(&e))
}

/// Source text of a bundled scenario, or an empty string.
#[wasm_bindgen]
pub fn bundled_scenario(name: &str) -> String {
    scenario::bundled_entries().iter().find(|b| b.name == name).map_or_else(String::new, |b| b.text.to_string())
}

/// Bundled scenario names, comma separated.
#[wasm_bindgen]
pub fn bundled_names() -> String {
    scenario::bundled_names().join(",")
}

#[cfg(test)]
mod tests {
    use super::*;

    fn checks(report: &str) -> Value {
        serde_json::from_str::<Value>(report).unwrap()["checks"].clone()
    }

    #[test]
    fn gaussian_gabor_is_a_frame_below_critical_density() {
        let c = checks(&gabor_bounds_json("gaussian", 0.5, 0.5).unwrap());
        assert!(c[0]["value"].as_f64().unwrap() > 1e-3);
        let dense = checks(&gabor_bounds_json("gaussian", 0.25, 0.5).unwrap());
        assert!(dense[1]["value"].as_f64().unwrap() > c[1]["value"].as_f64().unwrap());
    }

    #[test]
    fn exponential_weak_residuals_are_small() {
        let c = checks(&exponential_weak_json(1.0, 10, 64).unwrap());
        assert!(c[0]["value"].as_f64().unwrap() > 0.5);
        assert!(c[1]["value"].as_f64().unwrap() < 1e-2);
    }

    #[test]
    fn bad_input_is_an_error_not_a_panic() {
        assert!(scenario_json("{").is_err());
        assert!(gabor_bounds_json("gaussian", 0.3, 1.0).is_err());
        assert!(gabor_bounds_json("boxcar", 0.5, 0.5).is_err());
        assert!(bundled_scenario("nope").is_empty());
        assert!(bundled_names().contains("exm1"));
    }
}
