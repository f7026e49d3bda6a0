//! wasm-bindgen entry points for the static page in `www/`.
//!
//! Every export takes plain numbers and returns a JSON string. The `*_json`
//! functions hold the logic and are what the native tests exercise.

use extinction_discount::analysis::{
    belief_update_response, discount_profile, table_factor, table_factor_zero_growth,
    BeliefResponse, Regime,
};
use extinction_discount::analytic::{evaluate, finiteness_check, ScenarioCase};
use extinction_discount::model::{ConsumptionPath, HazardParams, Utility};
use serde::Serialize;
use wasm_bindgen::prelude::*;

fn params(m: f64, big_m: f64, b: f64, theta: f64, alpha: f64) -> Result<HazardParams, String> {
    HazardParams::new(m, big_m, b)
        .and_then(|p| p.with_theta(theta))
        .and_then(|p| p.with_alpha(alpha))
        .map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct FactorRow {
    case: String,
    factor: f64,
    factor_n0: f64,
    finite: bool,
    /// `sum_t w_t` for constant unit consumption, when finite.
    weight_sum: Option<f64>,
}

pub fn factors_json(m: f64, big_m: f64, b: f64, theta: f64, alpha: f64) -> Result<String, String> {
    let p = params(m, big_m, b, theta, alpha)?;
    let unit = ConsumptionPath::constant(1.0).expect("valid path");
    let rows: Vec<FactorRow> = ScenarioCase::TABLE
        .into_iter()
        .map(|case| FactorRow {
            case: case.to_string(),
            factor: table_factor(case, &p),
            factor_n0: table_factor_zero_growth(case, &p),
            finite: finiteness_check(case, &p).finite,
            weight_sum: evaluate(case, &p, &unit, &Utility::Linear, 1e-9).ok().map(|s| s.value),
        })
        .collect();
    serde_json::to_string(&rows).map_err(|e| e.to_string())
}

pub fn profile_json(m: f64, big_m: f64, b: f64, horizon: u32) -> Result<String, String> {
    let p = params(m, big_m, b, 1.0, 0.5)?;
    let prof = discount_profile(&p, horizon.into()).map_err(|e| e.to_string())?;
    serde_json::to_string(&prof).map_err(|e| e.to_string())
}

#[derive(Serialize)]
struct SensitivityRow {
    case: String,
    response: Option<BeliefResponse>,
    error: Option<String>,
}

pub fn sensitivity_json(
    m: f64,
    big_m: f64,
    b: f64,
    theta: f64,
    alpha: f64,
    regime: &str,
) -> Result<String, String> {
    let p = params(m, big_m, b, theta, alpha)?;
    let regime = match regime {
        "birth-fixed" => Regime::BirthFixed,
        "growth-fixed" => Regime::GrowthFixed,
        other => return Err(format!("unknown regime `{other}`")),
    };
    let rows: Vec<SensitivityRow> = ScenarioCase::TABLE
        .into_iter()
        .map(|case| match belief_update_response(case, &p, regime, 0.0, 0.0) {
            Ok(r) => SensitivityRow { case: case.to_string(), response: Some(r), error: None },
            Err(e) => SensitivityRow { case: case.to_string(), response: None, error: Some(e.to_string()) },
        })
        .collect();
    serde_json::to_string(&rows).map_err(|e| e.to_string())
}

#[wasm_bindgen]
pub fn factors(m: f64, big_m: f64, b: f64, theta: f64, alpha: f64) -> Result<String, JsError> {
    factors_json(m, big_m, b, theta, alpha).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn profile(m: f64, big_m: f64, b: f64, horizon: u32) -> Result<String, JsError> {
    profile_json(m, big_m, b, horizon).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn sensitivity(
    m: f64,
    big_m: f64,
    b: f64,
    theta: f64,
    alpha: f64,
    regime: &str,
) -> Result<String, JsError> {
    sensitivity_json(m, big_m, b, theta, alpha, regime).map_err(|e| JsError::new(&e))
}
