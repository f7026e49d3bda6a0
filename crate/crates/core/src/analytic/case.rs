use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::distribution::pow;
use crate::model::HazardParams;

/// Which decision maker's objective is being evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ScenarioCase {
    /// Selfish individual.
    Individual,
    /// Benthamite dynasty.
    Dynasty,
    /// Dynasty with utilitarianism weight `theta`.
    DynastyTheta,
    /// Genetic lineage with transmission exponent `alpha`.
    Lineage,
    /// Aggregate social welfare of all cohorts.
    SocialWelfare,
    /// Individual who knows extinction strikes at the given date.
    KnownExtinction(u64),
}

impl ScenarioCase {
    /// The rows of the summary table, in order.
    pub const TABLE: [ScenarioCase; 5] = [
        ScenarioCase::Individual,
        ScenarioCase::Dynasty,
        ScenarioCase::DynastyTheta,
        ScenarioCase::Lineage,
        ScenarioCase::SocialWelfare,
    ];

    pub fn name(&self) -> &'static str {
        match self {
            ScenarioCase::Individual => "individual",
            ScenarioCase::Dynasty => "dynasty",
            ScenarioCase::DynastyTheta => "dynasty-theta",
            ScenarioCase::Lineage => "lineage",
            ScenarioCase::SocialWelfare => "social-welfare",
            ScenarioCase::KnownExtinction(_) => "known-extinction",
        }
    }

    /// Whether consecutive series weights have a constant ratio.
    pub fn has_constant_factor(&self) -> bool {
        !matches!(self, ScenarioCase::SocialWelfare)
    }
}

impl fmt::Display for ScenarioCase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScenarioCase::KnownExtinction(t) => write!(f, "known-extinction({t})"),
            other => f.write_str(other.name()),
        }
    }
}

/// Outcome of a finiteness check: the product that must stay below one and
/// its distance from one.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Finiteness {
    pub product: f64,
    /// `1 - product`.
    pub margin: f64,
    pub finite: bool,
}

/// Geometric ratio governing convergence of the case's series.
pub(crate) fn convergence_ratio(case: ScenarioCase, p: &HazardParams) -> f64 {
    let (m, big_m, b) = (p.mortality(), p.extinction(), p.birth());
    match case {
        ScenarioCase::Individual => (1.0 - m) * (1.0 - big_m),
        ScenarioCase::Dynasty | ScenarioCase::SocialWelfare => (1.0 - big_m) * p.gross_growth(),
        ScenarioCase::DynastyTheta => (1.0 - big_m) * p.gross_growth().powf(p.theta()),
        ScenarioCase::Lineage => (1.0 - big_m) * (1.0 + b).powf(p.alpha()) * (1.0 - m),
        ScenarioCase::KnownExtinction(_) => 1.0 - m,
    }
}

/// Checks the convergence condition of the case's infinite series.
///
/// Known-extinction sums are finite and always pass.
pub fn finiteness_check(case: ScenarioCase, params: &HazardParams) -> Finiteness {
    let product = convergence_ratio(case, params);
    let finite = match case {
        ScenarioCase::KnownExtinction(_) => true,
        _ => product < 1.0,
    };
    Finiteness { product, margin: 1.0 - product, finite }
}

/// Weight `w_t` of `u(c_t)` in the case's expected-utility series.
pub fn series_weight(case: ScenarioCase, p: &HazardParams, t: u64) -> f64 {
    let (m, big_m, b) = (p.mortality(), p.extinction(), p.birth());
    let tf = t as f64;
    match case {
        ScenarioCase::Individual => pow(1.0 - m, t) * pow(1.0 - big_m, t),
        ScenarioCase::Dynasty => pow(1.0 - big_m, t) * pow(p.gross_growth(), t),
        ScenarioCase::DynastyTheta => {
            pow(1.0 - big_m, t) * p.gross_growth().powf(p.theta() * tf)
        }
        ScenarioCase::Lineage => {
            pow(1.0 - big_m, t) * (1.0 + b).powf(p.alpha() * tf) * pow(1.0 - m, t)
        }
        ScenarioCase::SocialWelfare => social_weight(p, t),
        ScenarioCase::KnownExtinction(date) => {
            if t <= date {
                pow(1.0 - m, t)
            } else {
                0.0
            }
        }
    }
}

/// `N0 (1+b)/b ((1-M)(1-m)(1+b))^t (1 - (1+b)^-(t+1))`; requires `b > 0`.
pub(crate) fn social_weight(p: &HazardParams, t: u64) -> f64 {
    let b = p.birth();
    let scale = p.n0() * (1.0 + b) / b;
    let ratio = (1.0 - p.extinction()) * (1.0 - p.mortality()) * (1.0 + b);
    // 1 - (1+b)^-(t+1) without cancellation for small b
    let cohort = -(-((t + 1) as f64) * b.ln_1p()).exp_m1();
    scale * pow(ratio, t) * cohort
}

/// Weights of the stationary-population form
/// `(N0/m) (1-M)^t (1 - (1-m)^(t+1))`; requires `m > 0`.
pub(crate) fn social_weight_zero_growth(p: &HazardParams, t: u64) -> f64 {
    let m = p.mortality();
    let scale = p.n0() / m;
    let cohort = -(((t + 1) as f64) * (-m).ln_1p()).exp_m1();
    scale * pow(1.0 - p.extinction(), t) * cohort
}

pub(crate) fn require_extinction(p: &HazardParams) -> Result<()> {
    if p.extinction() == 0.0 {
        Err(Error::NoExtinction)
    } else {
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn finiteness_examples() {
        let p = HazardParams::zero_growth(0.02, 0.01).unwrap();
        let f = finiteness_check(ScenarioCase::Dynasty, &p);
        assert!(f.finite);
        assert!((f.margin - 0.01).abs() < 1e-15);

        // (1 - 0.005)(1.01) > 1
        let m = 0.02;
        let b = 1.01 / (1.0 - m) - 1.0;
        let p = HazardParams::new(m, 0.005, b).unwrap();
        let f = finiteness_check(ScenarioCase::Dynasty, &p);
        assert!(!f.finite);
        assert!((f.product - 0.995 * 1.01).abs() < 1e-14);

        let p = HazardParams::new(0.02, 0.01, 0.0).unwrap();
        assert!(finiteness_check(ScenarioCase::Individual, &p).finite);
        assert!(finiteness_check(ScenarioCase::KnownExtinction(10), &p).finite);
    }

    #[test]
    fn social_weight_matches_unsimplified_form() {
        let p = HazardParams::new(0.02, 0.01, 0.03).unwrap().with_n0(2.0).unwrap();
        for t in [0u64, 1, 5, 40] {
            let direct = 2.0 * 1.03 / 0.03
                * 0.99f64.powi(t as i32)
                * 0.98f64.powi(t as i32)
                * 1.03f64.powi(t as i32)
                * (1.0 - (1.0 / 1.03f64).powi(t as i32 + 1));
            let w = social_weight(&p, t);
            assert!((w - direct).abs() <= 1e-12 * direct, "t = {t}");
        }
    }

    #[test]
    fn display_names() {
        assert_eq!(ScenarioCase::KnownExtinction(7).to_string(), "known-extinction(7)");
        assert_eq!(ScenarioCase::DynastyTheta.to_string(), "dynasty-theta");
    }
}
