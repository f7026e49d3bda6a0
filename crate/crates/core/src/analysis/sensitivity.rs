//! Response of the discount factor to revised beliefs about `M` and `m`.
//!
//! Two regimes are offered for how the birth rate reacts when `m` moves:
//! it either stays put, or it adjusts so that the net growth rate `n` is
//! unchanged.

use serde::{Deserialize, Serialize};

use crate::analysis::factors::table_factor;
use crate::analytic::ScenarioCase;
use crate::error::{Error, Result};
use crate::model::HazardParams;

/// Central-difference step.
pub const FD_STEP: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Regime {
    /// `b` is held fixed.
    #[default]
    BirthFixed,
    /// `b` is recomputed from the new `m` to hold `n` fixed.
    GrowthFixed,
}

/// Factor derivatives and finite responses to a belief update.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BeliefResponse {
    pub case: ScenarioCase,
    pub regime: Regime,
    pub factor: f64,
    /// Closed-form `d factor / dM`.
    pub d_extinction: f64,
    /// Closed-form `d factor / dm`.
    pub d_mortality: f64,
    /// Central finite difference of `factor` in `M`.
    pub fd_extinction: f64,
    /// Central finite difference of `factor` in `m`.
    pub fd_mortality: f64,
    /// `factor(M + dM) - factor`.
    pub delta_extinction: f64,
    /// `factor(m + dm) - factor`.
    pub delta_mortality: f64,
    /// `|d factor / dM| >= |d factor / dm|`.
    pub extinction_dominates: bool,
}

/// Moves `M` and `m` by the given amounts under `regime`.
pub fn perturb(
    params: &HazardParams,
    regime: Regime,
    d_extinction: f64,
    d_mortality: f64,
) -> Result<HazardParams> {
    let moved = params.with_extinction(params.extinction() + d_extinction)?;
    let m = params.mortality() + d_mortality;
    match regime {
        Regime::BirthFixed => moved.with_mortality(m),
        Regime::GrowthFixed => {
            if m >= 1.0 {
                return Err(Error::InvalidParameter {
                    name: "m",
                    value: m,
                    reason: "holding n fixed needs m < 1",
                });
            }
            let birth = params.gross_growth() / (1.0 - m) - 1.0;
            moved.with_mortality(m)?.with_birth(birth)
        }
    }
}

fn closed_form(case: ScenarioCase, p: &HazardParams, regime: Regime) -> (f64, f64) {
    let (m, big_m, b) = (p.mortality(), p.extinction(), p.birth());
    let (theta, alpha) = (p.theta(), p.alpha());
    let gross = p.gross_growth();
    match (case, regime) {
        (ScenarioCase::Individual, _) => (-(1.0 - m), -(1.0 - big_m)),
        (ScenarioCase::KnownExtinction(_), _) => (0.0, -1.0),
        (ScenarioCase::Dynasty | ScenarioCase::SocialWelfare, Regime::BirthFixed) => {
            (-(1.0 - m) * (1.0 + b), -(1.0 - big_m) * (1.0 + b))
        }
        (ScenarioCase::Dynasty | ScenarioCase::SocialWelfare, Regime::GrowthFixed) => {
            (-gross, 0.0)
        }
        (ScenarioCase::DynastyTheta, Regime::BirthFixed) => (
            -gross.powf(theta),
            -(1.0 - big_m) * theta * (1.0 - m).powf(theta - 1.0) * (1.0 + b).powf(theta),
        ),
        (ScenarioCase::DynastyTheta, Regime::GrowthFixed) => (-gross.powf(theta), 0.0),
        (ScenarioCase::Lineage, Regime::BirthFixed) => (
            -(1.0 - m) * (1.0 + b).powf(alpha),
            -(1.0 - big_m) * (1.0 + b).powf(alpha),
        ),
        (ScenarioCase::Lineage, Regime::GrowthFixed) => (
            -(1.0 - m).powf(1.0 - alpha) * gross.powf(alpha),
            -(1.0 - alpha) * (1.0 - big_m) * (1.0 - m).powf(-alpha) * gross.powf(alpha),
        ),
    }
}

fn central_difference(
    case: ScenarioCase,
    params: &HazardParams,
    regime: Regime,
    name: &'static str,
) -> Result<f64> {
    let shift = |h: f64| match name {
        "M" => perturb(params, regime, h, 0.0),
        _ => perturb(params, regime, 0.0, h),
    };
    let out_of_domain = |_| Error::StencilOutOfDomain {
        name,
        value: if name == "M" { params.extinction() } else { params.mortality() },
        step: FD_STEP,
    };
    let up = shift(FD_STEP).map_err(out_of_domain)?;
    let down = shift(-FD_STEP).map_err(out_of_domain)?;
    Ok((table_factor(case, &up) - table_factor(case, &down)) / (2.0 * FD_STEP))
}

/// Sensitivity of the case's discount factor to `M` and `m`, plus the finite
/// change after moving `M` by `d_extinction` and, separately, `m` by
/// `d_mortality`.
pub fn belief_update_response(
    case: ScenarioCase,
    params: &HazardParams,
    regime: Regime,
    d_extinction: f64,
    d_mortality: f64,
) -> Result<BeliefResponse> {
    let factor = table_factor(case, params);
    let (d_ext, d_mort) = closed_form(case, params, regime);
    let fd_extinction = central_difference(case, params, regime, "M")?;
    let fd_mortality = central_difference(case, params, regime, "m")?;
    let delta_extinction =
        table_factor(case, &perturb(params, regime, d_extinction, 0.0)?) - factor;
    let delta_mortality = table_factor(case, &perturb(params, regime, 0.0, d_mortality)?) - factor;
    Ok(BeliefResponse {
        case,
        regime,
        factor,
        d_extinction: d_ext,
        d_mortality: d_mort,
        fd_extinction,
        fd_mortality,
        delta_extinction,
        delta_mortality,
        extinction_dominates: d_ext.abs() >= d_mort.abs(),
    })
}

impl BeliefResponse {
    /// Closed-form and finite-difference derivatives agree to `tol` relative,
    /// with relative error measured against `max(|exact|, 1)`.
    pub fn derivatives_agree(&self, tol: f64) -> bool {
        let close = |exact: f64, fd: f64| (exact - fd).abs() <= tol * exact.abs().max(1.0);
        close(self.d_extinction, self.fd_extinction) && close(self.d_mortality, self.fd_mortality)
    }
}
