use crate::analytic::case::{
    convergence_ratio, require_extinction, series_weight, social_weight,
    social_weight_zero_growth, ScenarioCase,
};
use crate::analytic::series::{sum_series, CompensatedSum, SeriesResult, Weights};
use crate::error::{Error, Result};
use crate::model::distribution::pow;
use crate::model::{ConsumptionPath, HazardParams, Utility};

fn constant_factor_series(
    case: ScenarioCase,
    params: &HazardParams,
    path: &ConsumptionPath,
    u: &Utility,
    tolerance: f64,
) -> Result<SeriesResult> {
    let weights = Weights {
        weight: |t| series_weight(case, params, t),
        scale: 1.0,
        ratio: convergence_ratio(case, params),
    };
    sum_series(case.name(), weights, path, u, tolerance)
}

/// Expected lifetime utility of a selfish individual,
/// `sum_t (1-m)^t (1-M)^t u(c_t)`.
pub fn eu_individual(
    params: &HazardParams,
    path: &ConsumptionPath,
    u: &Utility,
    tolerance: f64,
) -> Result<SeriesResult> {
    if params.is_degenerate() {
        return Err(Error::Degenerate);
    }
    constant_factor_series(ScenarioCase::Individual, params, path, u, tolerance)
}

/// Benthamite dynasty, `sum_t (1-M)^t (1+n)^t u(c_t)`.
pub fn ev_dynasty(
    params: &HazardParams,
    path: &ConsumptionPath,
    u: &Utility,
    tolerance: f64,
) -> Result<SeriesResult> {
    require_extinction(params)?;
    constant_factor_series(ScenarioCase::Dynasty, params, path, u, tolerance)
}

/// Dynasty with utilitarianism weight, `sum_t (1-M)^t (1+n)^(theta t) u(c_t)`.
pub fn ev_dynasty_theta(
    params: &HazardParams,
    path: &ConsumptionPath,
    u: &Utility,
    tolerance: f64,
) -> Result<SeriesResult> {
    require_extinction(params)?;
    constant_factor_series(ScenarioCase::DynastyTheta, params, path, u, tolerance)
}

/// Genetic lineage, `sum_t (1-M)^t (1+b)^(alpha t) (1-m)^t u(c_t)`.
pub fn eg_lineage(
    params: &HazardParams,
    path: &ConsumptionPath,
    u: &Utility,
    tolerance: f64,
) -> Result<SeriesResult> {
    require_extinction(params)?;
    constant_factor_series(ScenarioCase::Lineage, params, path, u, tolerance)
}

/// Expected lifetime utility when extinction is known to occur at
/// `extinction_date`: `sum_{t<=T} (1-m)^t u(c_t)`. Does not depend on `M`.
pub fn eu_known_extinction(
    mortality: f64,
    extinction_date: u64,
    path: &ConsumptionPath,
    u: &Utility,
) -> Result<f64> {
    u.validate()?;
    if !(0.0..=1.0).contains(&mortality) {
        return Err(Error::InvalidParameter {
            name: "m",
            value: mortality,
            reason: "must be a probability in [0, 1]",
        });
    }
    let sum: CompensatedSum = (0..=extinction_date)
        .map(|t| pow(1.0 - mortality, t) * u.eval(path.at(t)))
        .collect();
    Ok(sum.value())
}

/// Total utility `W(0, T)` of everyone alive between 0 and the known
/// extinction date.
///
/// Uses the closed cohort form for `b > 0` and the double-sum definition
/// otherwise.
pub fn welfare_window(
    params: &HazardParams,
    extinction_date: u64,
    path: &ConsumptionPath,
    u: &Utility,
) -> Result<f64> {
    u.validate()?;
    let b = params.birth();
    if b == 0.0 {
        return welfare_window_direct(params, extinction_date, path, u);
    }
    let sum: CompensatedSum = (0..=extinction_date)
        .map(|t| {
            let cohort = -(-((t + 1) as f64) * b.ln_1p()).exp_m1();
            u.eval(path.at(t)) * pow(params.gross_growth(), t) * cohort
        })
        .collect();
    Ok(params.n0() * (1.0 + b) / b * sum.value())
}

/// `W(0, T) = sum_{t<=T} N_t sum_{t<=tau<=T} (1-m)^(tau-t) u(c_tau)`, evaluated
/// term by term.
pub fn welfare_window_direct(
    params: &HazardParams,
    extinction_date: u64,
    path: &ConsumptionPath,
    u: &Utility,
) -> Result<f64> {
    u.validate()?;
    let utils: Vec<f64> = (0..=extinction_date).map(|t| u.eval(path.at(t))).collect();
    let mut total = CompensatedSum::default();
    for t in 0..=extinction_date {
        let size = params.n0() * pow(params.gross_growth(), t);
        let remaining: CompensatedSum = (t..=extinction_date)
            .map(|tau| pow(1.0 - params.mortality(), tau - t) * utils[tau as usize])
            .collect();
        total.add(size * remaining.value());
    }
    Ok(total.value())
}

/// Expected social welfare,
/// `N0 (1+b)/b sum_t u(c_t) (1-M)^t (1-m)^t (1+b)^t (1 - (1+b)^-(t+1))`.
pub fn ew_social(
    params: &HazardParams,
    path: &ConsumptionPath,
    u: &Utility,
    tolerance: f64,
) -> Result<SeriesResult> {
    if params.birth() == 0.0 {
        return Err(Error::ZeroBirthRate);
    }
    require_extinction(params)?;
    let b = params.birth();
    let weights = Weights {
        weight: |t| social_weight(params, t),
        scale: params.n0() * (1.0 + b) / b,
        ratio: convergence_ratio(ScenarioCase::SocialWelfare, params),
    };
    sum_series(ScenarioCase::SocialWelfare.name(), weights, path, u, tolerance)
}

/// Stationary-population form of [`ew_social`],
/// `(N0/m) sum_t u(c_t) (1-M)^t (1 - (1-m)^(t+1))`.
///
/// Only valid when `(1+b)(1-m) = 1`; parameters more than `1e-9` away from
/// zero growth are rejected.
pub fn ew_social_zero_growth(
    params: &HazardParams,
    path: &ConsumptionPath,
    u: &Utility,
    tolerance: f64,
) -> Result<SeriesResult> {
    if params.growth().abs() > 1e-9 {
        return Err(Error::InvalidParameter {
            name: "n",
            value: params.growth(),
            reason: "stationary-population form needs n = 0",
        });
    }
    if params.mortality() == 0.0 {
        return Err(Error::InvalidParameter {
            name: "m",
            value: 0.0,
            reason: "stationary-population form needs m > 0",
        });
    }
    require_extinction(params)?;
    let weights = Weights {
        weight: |t| social_weight_zero_growth(params, t),
        scale: params.n0() / params.mortality(),
        ratio: 1.0 - params.extinction(),
    };
    sum_series(ScenarioCase::SocialWelfare.name(), weights, path, u, tolerance)
}

/// Evaluates the functional belonging to `case`.
///
/// Known-extinction sums are finite and reported as exact results.
pub fn evaluate(
    case: ScenarioCase,
    params: &HazardParams,
    path: &ConsumptionPath,
    u: &Utility,
    tolerance: f64,
) -> Result<SeriesResult> {
    match case {
        ScenarioCase::Individual => eu_individual(params, path, u, tolerance),
        ScenarioCase::Dynasty => ev_dynasty(params, path, u, tolerance),
        ScenarioCase::DynastyTheta => ev_dynasty_theta(params, path, u, tolerance),
        ScenarioCase::Lineage => eg_lineage(params, path, u, tolerance),
        ScenarioCase::SocialWelfare => ew_social(params, path, u, tolerance),
        ScenarioCase::KnownExtinction(date) => {
            let value = eu_known_extinction(params.mortality(), date, path, u)?;
            Ok(SeriesResult::exact(value, date))
        }
    }
}
