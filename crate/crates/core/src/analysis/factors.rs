use serde::{Deserialize, Serialize};

use crate::analytic::{series_weight, ScenarioCase};
use crate::error::{Error, Result};
use crate::model::HazardParams;

/// Per-period discount factor of a case, with the implied discount rates.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscountReport {
    pub case: ScenarioCase,
    /// Constant factor, or the long-run factor when `constant` is false.
    pub factor: f64,
    pub constant: bool,
    /// `1 - factor`.
    pub rate_simple: f64,
    /// `-ln(factor)`.
    pub rate_log: f64,
    /// Factor at the same `m`, `M`, `alpha`, `theta` with a stationary
    /// population, `(1+b)(1-m) = 1`.
    pub factor_n0: f64,
    pub note: Option<String>,
}

/// Discount factor written in terms of `m`, `M`, `b`, `theta`, `alpha`.
///
/// These are the summary-table expressions, evaluated independently of the
/// series weights used by the analytic engine.
pub fn table_factor(case: ScenarioCase, p: &HazardParams) -> f64 {
    let (m, big_m, b) = (p.mortality(), p.extinction(), p.birth());
    match case {
        ScenarioCase::Individual => (1.0 - big_m) * (1.0 - m),
        ScenarioCase::Dynasty | ScenarioCase::SocialWelfare => (1.0 - big_m) * (1.0 - m) * (1.0 + b),
        ScenarioCase::DynastyTheta => {
            (1.0 - big_m) * (1.0 - m).powf(p.theta()) * (1.0 + b).powf(p.theta())
        }
        ScenarioCase::Lineage => (1.0 - big_m) * (1.0 - m) * (1.0 + b).powf(p.alpha()),
        ScenarioCase::KnownExtinction(_) => 1.0 - m,
    }
}

/// Stationary-population column of the summary table.
pub fn table_factor_zero_growth(case: ScenarioCase, p: &HazardParams) -> f64 {
    let (m, big_m) = (p.mortality(), p.extinction());
    match case {
        ScenarioCase::Individual => (1.0 - big_m) * (1.0 - m),
        ScenarioCase::Dynasty | ScenarioCase::DynastyTheta | ScenarioCase::SocialWelfare => {
            1.0 - big_m
        }
        ScenarioCase::Lineage => (1.0 - big_m) * (1.0 - m).powf(1.0 - p.alpha()),
        ScenarioCase::KnownExtinction(_) => 1.0 - m,
    }
}

pub fn discount_factor(case: ScenarioCase, params: &HazardParams) -> DiscountReport {
    let factor = table_factor(case, params);
    let note = match case {
        ScenarioCase::SocialWelfare => {
            Some("rate is not constant; factor is the long-run limit".to_string())
        }
        ScenarioCase::KnownExtinction(_) => {
            Some("known extinction date: factor ignores extinction risk".to_string())
        }
        _ => None,
    };
    DiscountReport {
        case,
        factor,
        constant: case.has_constant_factor(),
        rate_simple: 1.0 - factor,
        rate_log: -factor.ln(),
        factor_n0: table_factor_zero_growth(case, params),
        note,
    }
}

/// `w_{t+1} / w_t` for `t = 0..horizon` from the engine's series weights.
///
/// Stops early once a weight vanishes (zero factor, or past a known
/// extinction date).
pub fn weight_ratios(case: ScenarioCase, params: &HazardParams, horizon: u64) -> Vec<f64> {
    let mut out = Vec::new();
    let mut prev = series_weight(case, params, 0);
    for t in 0..horizon {
        if prev == 0.0 {
            break;
        }
        let next = series_weight(case, params, t + 1);
        if let ScenarioCase::KnownExtinction(date) = case {
            if t + 1 > date {
                break;
            }
        }
        out.push(next / prev);
        prev = next;
    }
    out
}

/// Number of consecutive weight ratios inspected by [`factor_from_weights`].
pub const RATIO_CHECK_HORIZON: u64 = 50;

/// Discount factor recovered from the ratio of consecutive series weights.
///
/// All ratios up to [`RATIO_CHECK_HORIZON`] must coincide to `1e-12`
/// relative; the first one is returned.
pub fn factor_from_weights(case: ScenarioCase, params: &HazardParams) -> Result<f64> {
    if !case.has_constant_factor() {
        return Err(Error::NonConstantFactor(case.to_string()));
    }
    let ratios = weight_ratios(case, params, RATIO_CHECK_HORIZON);
    let Some(&first) = ratios.first() else {
        return Err(Error::InvalidParameter {
            name: "extinction_date",
            value: 0.0,
            reason: "a single-period window has no consecutive weights",
        });
    };
    if ratios.iter().any(|r| (r - first).abs() > 1e-12 * first.abs()) {
        return Err(Error::NonConstantFactor(case.to_string()));
    }
    Ok(first)
}
