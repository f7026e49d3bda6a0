use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analytic::case::{convergence_ratio, require_extinction, ScenarioCase};
use crate::analytic::series::CompensatedSum;
use crate::error::{Error, Result};
use crate::model::distribution::pow;
use crate::model::{ConsumptionPath, GeometricDate, HazardParams, LifetimeSampler, Utility};
use crate::simulation::abm::{integer_founders, simulate_population};
use crate::simulation::{default_horizon, stream_rng, SimMode, SimulationConfig, CHUNK};

/// Monte Carlo estimate with its standard error.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SimEstimate {
    pub mean: f64,
    /// Sample standard deviation over `sqrt(replications)`.
    pub standard_error: f64,
    pub replications: u64,
    /// Probability that the sampled date exceeded the horizon cap.
    pub truncated_mass: f64,
}

impl SimEstimate {
    /// Whether `target` lies within `k` standard errors of the mean.
    pub fn agrees_with(&self, target: f64, k: f64) -> bool {
        (self.mean - target).abs() <= k * self.standard_error
    }
}

/// Running mean and sum of squared deviations (Welford), mergeable.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct Moments {
    pub count: u64,
    pub mean: f64,
    pub m2: f64,
}

impl Moments {
    pub fn push(&mut self, x: f64) {
        self.count += 1;
        let delta = x - self.mean;
        self.mean += delta / self.count as f64;
        self.m2 += delta * (x - self.mean);
    }

    pub fn merge(self, other: Moments) -> Moments {
        if self.count == 0 {
            return other;
        }
        if other.count == 0 {
            return self;
        }
        let count = self.count + other.count;
        let delta = other.mean - self.mean;
        let mean = self.mean + delta * other.count as f64 / count as f64;
        let m2 = self.m2
            + other.m2
            + delta * delta * (self.count as f64 * other.count as f64 / count as f64);
        Moments { count, mean, m2 }
    }

    pub fn standard_error(&self) -> f64 {
        if self.count < 2 {
            return 0.0;
        }
        let n = self.count as f64;
        (self.m2.max(0.0) / (n - 1.0)).sqrt() / n.sqrt()
    }
}

/// Runs `replications` draws chunk by chunk and merges in chunk order.
pub(crate) fn run_chunks<T, F, G>(replications: u64, seed: u64, init: G, draw: F) -> Vec<T>
where
    T: Send,
    G: Fn() -> T + Sync,
    F: Fn(&mut ChaCha8Rng, &mut T, u64) + Sync,
{
    let chunks = replications.div_ceil(CHUNK);
    (0..chunks)
        .into_par_iter()
        .map(|i| {
            let mut rng = stream_rng(seed, i);
            let mut acc = init();
            let start = i * CHUNK;
            let end = (start + CHUNK).min(replications);
            for r in start..end {
                draw(&mut rng, &mut acc, r);
            }
            acc
        })
        .collect()
}

fn estimate<F>(config: &SimulationConfig, truncated_mass: f64, draw: F) -> Result<SimEstimate>
where
    F: Fn(&mut ChaCha8Rng) -> f64 + Sync,
{
    if config.replications == 0 {
        return Err(Error::InvalidParameter {
            name: "replications",
            value: 0.0,
            reason: "must be >= 1",
        });
    }
    let parts = run_chunks(config.replications, config.seed, Moments::default, |rng, acc, _| {
        acc.push(draw(rng))
    });
    let total = parts.into_iter().fold(Moments::default(), Moments::merge);
    Ok(SimEstimate {
        mean: total.mean,
        standard_error: total.standard_error(),
        replications: total.count,
        truncated_mass,
    })
}

/// `table[T] = sum_{t<=T} term(t)` for `T = 0..=horizon`.
fn cumulative(horizon: u64, term: impl Fn(u64) -> f64) -> Vec<f64> {
    let mut acc = CompensatedSum::default();
    (0..=horizon)
        .map(|t| {
            acc.add(term(t));
            acc.value()
        })
        .collect()
}

fn smoothed_only(config: &SimulationConfig) -> Result<()> {
    match config.mode {
        SimMode::Smoothed => Ok(()),
        SimMode::AgentBased => Err(Error::UnsupportedMode(
            "agent-based mode is only available for social welfare",
        )),
    }
}

fn check_finite(case: ScenarioCase, params: &HazardParams) -> Result<f64> {
    let ratio = convergence_ratio(case, params);
    if ratio >= 1.0 {
        Err(Error::Divergent { case: case.name().to_string(), factor: ratio })
    } else {
        Ok(ratio)
    }
}

/// Horizon for extinction-date sampling: explicit cap, or the date beyond
/// which both the extinction tail and the weighted tail are negligible.
fn extinction_horizon(config: &SimulationConfig, params: &HazardParams, ratio: f64) -> u64 {
    config
        .horizon_cap
        .unwrap_or_else(|| default_horizon(ratio.max(1.0 - params.extinction())))
}

/// Samples extinction dates and averages the realized weighted utility
/// `sum_{t<=T} weight(t) u(c_t)`.
fn extinction_mixture(
    params: &HazardParams,
    path: &ConsumptionPath,
    u: &Utility,
    config: &SimulationConfig,
    ratio: f64,
    weight: impl Fn(u64) -> f64,
) -> Result<SimEstimate> {
    let horizon = extinction_horizon(config, params, ratio);
    let table = cumulative(horizon, |t| weight(t) * u.eval(path.at(t)));
    let dates = GeometricDate::new(params.extinction())?;
    let truncated = pow(1.0 - params.extinction(), horizon + 1);
    estimate(config, truncated, |rng| {
        let date = dates.sample(rng).expect("extinction hazard > 0").min(horizon);
        table[date as usize]
    })
}

/// Samples individual lifetimes and averages `u(c_0) + ... + u(c_D)`.
pub fn mc_eu_individual(
    params: &HazardParams,
    path: &ConsumptionPath,
    u: &Utility,
    config: &SimulationConfig,
) -> Result<SimEstimate> {
    u.validate()?;
    smoothed_only(config)?;
    let sampler = LifetimeSampler::new(params)?;
    let survive = convergence_ratio(ScenarioCase::Individual, params);
    let horizon = config.horizon_cap.unwrap_or_else(|| default_horizon(survive));
    let table = cumulative(horizon, |t| u.eval(path.at(t)));
    let truncated = pow(survive, horizon + 1);
    estimate(config, truncated, |rng| table[sampler.sample(rng).min(horizon) as usize])
}

/// Dynasty with utilitarianism weight `theta` (`theta = 1`: Benthamite).
pub fn mc_ev_dynasty(
    params: &HazardParams,
    path: &ConsumptionPath,
    u: &Utility,
    theta: f64,
    config: &SimulationConfig,
) -> Result<SimEstimate> {
    u.validate()?;
    smoothed_only(config)?;
    let params = params.with_theta(theta)?;
    require_extinction(&params)?;
    let ratio = check_finite(ScenarioCase::DynastyTheta, &params)?;
    let growth = params.gross_growth();
    extinction_mixture(&params, path, u, config, ratio, |t| growth.powf(theta * t as f64))
}

/// Genetic lineage weights `(1+b)^(alpha t) (1-m)^t` conditional on `T`.
pub fn mc_eg_lineage(
    params: &HazardParams,
    path: &ConsumptionPath,
    u: &Utility,
    config: &SimulationConfig,
) -> Result<SimEstimate> {
    u.validate()?;
    smoothed_only(config)?;
    require_extinction(params)?;
    let ratio = check_finite(ScenarioCase::Lineage, params)?;
    let (b, m, alpha) = (params.birth(), params.mortality(), params.alpha());
    extinction_mixture(params, path, u, config, ratio, |t| {
        (1.0 + b).powf(alpha * t as f64) * pow(1.0 - m, t)
    })
}

/// Samples `T` and averages the realized welfare `W(0, T)`.
///
/// Smoothed mode evaluates `W(0, T)` from its double-sum definition (via the
/// cohort recursion); agent-based mode simulates integer agents from
/// `N0` founders, which must then be a whole number.
pub fn mc_ew_social(
    params: &HazardParams,
    path: &ConsumptionPath,
    u: &Utility,
    config: &SimulationConfig,
) -> Result<SimEstimate> {
    u.validate()?;
    if params.birth() == 0.0 {
        return Err(Error::ZeroBirthRate);
    }
    require_extinction(params)?;
    let ratio = check_finite(ScenarioCase::SocialWelfare, params)?;
    let horizon = extinction_horizon(config, params, ratio);
    let dates = GeometricDate::new(params.extinction())?;
    let truncated = pow(1.0 - params.extinction(), horizon + 1);
    match config.mode {
        SimMode::Smoothed => {
            let table = welfare_table(params, path, u, horizon);
            estimate(config, truncated, |rng| {
                let date = dates.sample(rng).expect("extinction hazard > 0").min(horizon);
                table[date as usize]
            })
        }
        SimMode::AgentBased => {
            let founders = integer_founders(params)?;
            let utils: Vec<f64> = (0..=horizon).map(|t| u.eval(path.at(t))).collect();
            estimate(config, truncated, |rng| {
                let date = dates.sample(rng).expect("extinction hazard > 0").min(horizon);
                simulate_population(params, founders, &utils, config.offspring_law, date, rng)
                    .welfare
            })
        }
    }
}

/// `W(0, T)` for `T = 0..=horizon` by the recursion
/// `A_T = (1-m) A_{T-1} + N_T`, `W(0, T) = W(0, T-1) + u(c_T) A_T`, which
/// reorders the double sum over cohorts and dates.
pub(crate) fn welfare_table(
    params: &HazardParams,
    path: &ConsumptionPath,
    u: &Utility,
    horizon: u64,
) -> Vec<f64> {
    let mut exposure = 0.0;
    let mut acc = CompensatedSum::default();
    (0..=horizon)
        .map(|t| {
            exposure = (1.0 - params.mortality()) * exposure
                + params.n0() * pow(params.gross_growth(), t);
            acc.add(u.eval(path.at(t)) * exposure);
            acc.value()
        })
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::analytic::welfare_window_direct;

    fn unit() -> (ConsumptionPath, Utility) {
        (ConsumptionPath::constant(1.0).unwrap(), Utility::Linear)
    }

    #[test]
    fn moments_merge_matches_single_pass() {
        let xs: Vec<f64> = (0..1000).map(|i| ((i * 37) % 101) as f64 * 0.1).collect();
        let mut whole = Moments::default();
        xs.iter().for_each(|&x| whole.push(x));
        let (a, b) = xs.split_at(313);
        let mut left = Moments::default();
        let mut right = Moments::default();
        a.iter().for_each(|&x| left.push(x));
        b.iter().for_each(|&x| right.push(x));
        let merged = left.merge(right);
        assert_eq!(merged.count, whole.count);
        assert!((merged.mean - whole.mean).abs() < 1e-12);
        assert!((merged.m2 - whole.m2).abs() < 1e-9 * whole.m2);
    }

    #[test]
    fn welfare_table_matches_definition() {
        let path = ConsumptionPath::new(vec![1.0, 2.0, 0.5], Default::default()).unwrap();
        let p = HazardParams::new(0.1, 0.05, 0.2).unwrap().with_n0(3.0).unwrap();
        let table = welfare_table(&p, &path, &Utility::Log, 12);
        for (t, w) in table.iter().enumerate() {
            let direct = welfare_window_direct(&p, t as u64, &path, &Utility::Log).unwrap();
            assert!((w - direct).abs() < 1e-12 * direct.abs().max(1.0));
        }
    }

    #[test]
    fn certain_death_is_exact() {
        let (path, u) = unit();
        let p = HazardParams::new(1.0, 0.0, 0.0).unwrap();
        let e = mc_eu_individual(&p, &path, &u, &SimulationConfig::new(1000, 1)).unwrap();
        assert_eq!(e.mean, 1.0);
        assert_eq!(e.standard_error, 0.0);
    }

    #[test]
    fn immediate_extinction_is_exact() {
        let path = ConsumptionPath::new(vec![3.0, 5.0], Default::default()).unwrap();
        let u = Utility::Linear;
        let p = HazardParams::new(0.02, 1.0, 0.03).unwrap().with_n0(4.0).unwrap();
        let cfg = SimulationConfig::new(500, 9);
        assert_eq!(mc_ev_dynasty(&p, &path, &u, 0.7, &cfg).unwrap().mean, 3.0);
        assert_eq!(mc_eg_lineage(&p, &path, &u, &cfg).unwrap().mean, 3.0);
        let w = mc_ew_social(&p, &path, &u, &cfg).unwrap();
        assert_eq!(w.mean, 12.0);
        assert_eq!(w.standard_error, 0.0);
    }

    #[test]
    fn rejections() {
        let (path, u) = unit();
        let cfg = SimulationConfig::new(10, 0);
        let degenerate = HazardParams::new(0.0, 0.0, 0.1).unwrap();
        assert_eq!(mc_eu_individual(&degenerate, &path, &u, &cfg), Err(Error::Degenerate));
        assert_eq!(mc_ev_dynasty(&degenerate, &path, &u, 1.0, &cfg), Err(Error::NoExtinction));
        let growing = HazardParams::new(0.0, 0.005, 0.01).unwrap();
        assert!(matches!(
            mc_ev_dynasty(&growing, &path, &u, 1.0, &cfg),
            Err(Error::Divergent { .. })
        ));
        let no_births = HazardParams::new(0.02, 0.01, 0.0).unwrap();
        assert_eq!(mc_ew_social(&no_births, &path, &u, &cfg), Err(Error::ZeroBirthRate));
        let abm = SimulationConfig { mode: SimMode::AgentBased, ..cfg };
        assert!(matches!(
            mc_eu_individual(&no_births, &path, &u, &abm),
            Err(Error::UnsupportedMode(_))
        ));
        let zero = SimulationConfig::new(0, 0);
        assert!(mc_eu_individual(&no_births, &path, &u, &zero).is_err());
    }

    #[test]
    fn reproducible_across_thread_counts() {
        let (path, u) = unit();
        let p = HazardParams::new(0.02, 0.01, 0.03).unwrap();
        let cfg = SimulationConfig::new(3 * CHUNK + 17, 42);
        let one = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let four = rayon::ThreadPoolBuilder::new().num_threads(4).build().unwrap();
        let a = one.install(|| mc_ew_social(&p, &path, &u, &cfg).unwrap());
        let b = four.install(|| mc_ew_social(&p, &path, &u, &cfg).unwrap());
        assert_eq!(a.mean.to_bits(), b.mean.to_bits());
        assert_eq!(a.standard_error.to_bits(), b.standard_error.to_bits());
    }
}
