//! Agent-based overlapping-generations population.
//!
//! Agents are grouped into birth cohorts. Each period runs: consumption of
//! everyone alive, the extinction check, Bernoulli(m) deaths, then births to
//! the survivors. Unlike the smoothed model the population can die off before
//! extinction strikes.
//!
//! Realized welfare follows the accounting of `W(0, T)`: at date `t` every
//! agent alive collects `u(c_t)` once for each date since its birth at which
//! it has been counted, i.e. `age + 1` times.

use rand::Rng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Bernoulli, Binomial, Distribution, Poisson};
use serde::{Deserialize, Serialize};

use crate::analytic::ew_social;
use crate::analytic::series::DEFAULT_TOLERANCE;
use crate::error::{Error, Result};
use crate::model::distribution::pow;
use crate::model::{ConsumptionPath, GeometricDate, HazardParams, Utility};
use crate::simulation::estimator::{welfare_table, Moments};
use crate::simulation::{default_horizon, stream_rng, OffspringLaw, SimulationConfig, CHUNK};

/// One simulated population history.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AbmRun {
    /// Number alive at each date up to the end of the run.
    pub trajectory: Vec<u64>,
    pub welfare: f64,
    /// Scheduled last date: the extinction date, capped at the horizon.
    pub end_date: u64,
    /// Date at which the population hit zero before extinction.
    pub die_off_date: Option<u64>,
}

impl AbmRun {
    pub fn early_die_off(&self) -> bool {
        self.die_off_date.is_some()
    }
}

pub(crate) fn integer_founders(params: &HazardParams) -> Result<u64> {
    let n0 = params.n0();
    if n0.fract() != 0.0 || n0 < 1.0 {
        return Err(Error::InvalidParameter {
            name: "n0",
            value: n0,
            reason: "agent-based mode needs a whole number of founders",
        });
    }
    Ok(n0 as u64)
}

fn check_law(law: OffspringLaw, params: &HazardParams) -> Result<()> {
    if law == OffspringLaw::BernoulliPair && params.birth() > 1.0 {
        return Err(Error::InvalidParameter {
            name: "b",
            value: params.birth(),
            reason: "bernoulli-pair births need b <= 1",
        });
    }
    Ok(())
}

fn births<R: Rng + ?Sized>(law: OffspringLaw, b: f64, survivors: u64, rng: &mut R) -> u64 {
    if survivors == 0 || b == 0.0 {
        return 0;
    }
    match law {
        OffspringLaw::PoissonMeanB => {
            let lambda = b * survivors as f64;
            Poisson::new(lambda).expect("positive rate").sample(rng) as u64
        }
        OffspringLaw::BernoulliPair => {
            let pairs = survivors / 2;
            let mut born = 2 * Binomial::new(pairs, b).expect("b <= 1").sample(rng);
            if survivors % 2 == 1 && Bernoulli::new(b).expect("b <= 1").sample(rng) {
                born += 1;
            }
            born
        }
    }
}

/// Simulates one history from `founders` agents until `end_date` or until
/// the population dies off. `utils[t]` holds `u(c_t)` and must cover
/// `0..=end_date`.
pub fn simulate_population<R: Rng + ?Sized>(
    params: &HazardParams,
    founders: u64,
    utils: &[f64],
    law: OffspringLaw,
    end_date: u64,
    rng: &mut R,
) -> AbmRun {
    let m = params.mortality();
    // (birth date, count)
    let mut cohorts: Vec<(u64, u64)> = vec![(0, founders)];
    let mut trajectory = Vec::new();
    let mut welfare = 0.0;
    let mut die_off_date = None;
    for t in 0..=end_date {
        let alive: u64 = cohorts.iter().map(|c| c.1).sum();
        trajectory.push(alive);
        if alive == 0 {
            die_off_date = Some(t);
            break;
        }
        let exposure: u64 = cohorts.iter().map(|&(born, n)| n * (t - born + 1)).sum();
        welfare += utils[t as usize] * exposure as f64;
        if t == end_date {
            break;
        }
        let mut survivors = 0;
        for cohort in cohorts.iter_mut() {
            if m > 0.0 {
                cohort.1 -= Binomial::new(cohort.1, m).expect("m is a probability").sample(rng);
            }
            survivors += cohort.1;
        }
        cohorts.retain(|c| c.1 > 0);
        let born = births(law, params.birth(), survivors, rng);
        if born > 0 {
            cohorts.push((t + 1, born));
        }
    }
    AbmRun {
        end_date,
        trajectory,
        welfare,
        die_off_date,
    }
}

fn abm_horizon(params: &HazardParams, config: &SimulationConfig) -> Result<u64> {
    match config.horizon_cap {
        Some(cap) => Ok(cap),
        None if params.extinction() > 0.0 => Ok(default_horizon(1.0 - params.extinction())),
        None => Err(Error::MissingHorizonCap),
    }
}

/// Single agent-based history seeded from `config.seed`.
pub fn abm_population_run(
    params: &HazardParams,
    founders: u64,
    path: &ConsumptionPath,
    u: &Utility,
    config: &SimulationConfig,
) -> Result<AbmRun> {
    u.validate()?;
    check_law(config.offspring_law, params)?;
    let horizon = abm_horizon(params, config)?;
    let mut rng = stream_rng(config.seed, 0);
    let date = GeometricDate::new(params.extinction())?
        .sample(&mut rng)
        .map_or(horizon, |d| d.min(horizon));
    let utils: Vec<f64> = (0..=date).map(|t| u.eval(path.at(t))).collect();
    Ok(simulate_population(params, founders, &utils, config.offspring_law, date, &mut rng))
}

/// Aggregate of many agent-based histories compared with the smoothed model.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AbmSummary {
    pub founders: u64,
    pub replications: u64,
    pub mean_welfare: f64,
    pub standard_error: f64,
    /// Analytic expected social welfare of the smoothed model.
    pub smoothed_ew: f64,
    /// `|mean_welfare - smoothed_ew|`.
    pub mean_gap: f64,
    /// Mean of `|W_abm - W_smooth(T)| / N0` over histories sharing the date `T`.
    pub per_capita_abs_gap: f64,
    pub per_capita_abs_gap_se: f64,
    pub die_off_frequency: f64,
    pub truncated_mass: f64,
}

#[derive(Default)]
struct StudyAcc {
    welfare: Moments,
    gap: Moments,
    die_offs: u64,
}

/// Runs `config.replications` histories with `founders` initial agents.
///
/// Extinction dates come from their own streams, so studies that differ only
/// in `founders` see the same dates (common random numbers).
pub fn abm_study(
    params: &HazardParams,
    founders: u64,
    path: &ConsumptionPath,
    u: &Utility,
    config: &SimulationConfig,
) -> Result<AbmSummary> {
    use rayon::prelude::*;

    u.validate()?;
    check_law(config.offspring_law, params)?;
    if founders == 0 || config.replications == 0 {
        return Err(Error::InvalidParameter {
            name: if founders == 0 { "founders" } else { "replications" },
            value: 0.0,
            reason: "must be >= 1",
        });
    }
    let params = params.with_n0(founders as f64)?;
    let smoothed = ew_social(&params, path, u, DEFAULT_TOLERANCE)?;
    let horizon = abm_horizon(&params, config)?;
    let utils: Vec<f64> = (0..=horizon).map(|t| u.eval(path.at(t))).collect();
    let smooth_table = welfare_table(&params, path, u, horizon);
    let dates = GeometricDate::new(params.extinction())?;
    let n0 = founders as f64;

    let chunks = config.replications.div_ceil(CHUNK);
    let parts: Vec<StudyAcc> = (0..chunks)
        .into_par_iter()
        .map(|i| {
            let mut date_rng: ChaCha8Rng = stream_rng(config.seed, 2 * i);
            let mut agent_rng: ChaCha8Rng = stream_rng(config.seed, 2 * i + 1);
            let n = CHUNK.min(config.replications - i * CHUNK);
            let mut acc = StudyAcc::default();
            for _ in 0..n {
                let date = dates.sample(&mut date_rng).expect("M > 0").min(horizon);
                let run = simulate_population(
                    &params,
                    founders,
                    &utils,
                    config.offspring_law,
                    date,
                    &mut agent_rng,
                );
                acc.welfare.push(run.welfare);
                acc.gap.push((run.welfare - smooth_table[date as usize]).abs() / n0);
                if run.early_die_off() {
                    acc.die_offs += 1;
                }
            }
            acc
        })
        .collect();

    let (welfare, gap, die_offs) = parts.into_iter().fold(
        (Moments::default(), Moments::default(), 0),
        |(w, g, d), acc| (w.merge(acc.welfare), g.merge(acc.gap), d + acc.die_offs),
    );
    Ok(AbmSummary {
        founders,
        replications: welfare.count,
        mean_welfare: welfare.mean,
        standard_error: welfare.standard_error(),
        smoothed_ew: smoothed.value,
        mean_gap: (welfare.mean - smoothed.value).abs(),
        per_capita_abs_gap: gap.mean,
        per_capita_abs_gap_se: gap.standard_error(),
        die_off_frequency: die_offs as f64 / welfare.count as f64,
        truncated_mass: pow(1.0 - params.extinction(), horizon + 1),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn unit() -> (ConsumptionPath, Utility) {
        (ConsumptionPath::constant(1.0).unwrap(), Utility::Linear)
    }

    #[test]
    fn certain_death_empties_population() {
        let p = HazardParams::new(1.0, 0.001, 0.0).unwrap();
        let utils = vec![1.0; 10];
        let mut rng = stream_rng(1, 0);
        for _ in 0..50 {
            let run = simulate_population(&p, 25, &utils, OffspringLaw::PoissonMeanB, 5, &mut rng);
            assert_eq!(run.trajectory, vec![25, 0]);
            assert_eq!(run.die_off_date, Some(1));
            assert_eq!(run.welfare, 25.0);
        }
    }

    #[test]
    fn welfare_accounting_without_deaths() {
        // no deaths, no births: N agents alive at t each counted t+1 times
        let p = HazardParams::new(0.0, 0.5, 0.0).unwrap();
        let utils = vec![1.0; 4];
        let mut rng = stream_rng(0, 0);
        let run = simulate_population(&p, 3, &utils, OffspringLaw::PoissonMeanB, 3, &mut rng);
        assert_eq!(run.trajectory, vec![3, 3, 3, 3]);
        assert_eq!(run.welfare, 3.0 * (1.0 + 2.0 + 3.0 + 4.0));
        assert!(!run.early_die_off());
    }

    #[test]
    fn no_births_means_certain_die_off() {
        let (path, u) = unit();
        let p = HazardParams::new(0.5, 0.0, 0.0).unwrap();
        let mut died_by = [0u64; 4];
        let runs = 4000;
        for seed in 0..runs {
            let cfg = SimulationConfig { horizon_cap: Some(200), ..SimulationConfig::new(1, seed) };
            let run = abm_population_run(&p, 1, &path, &u, &cfg).unwrap();
            let date = run.die_off_date.expect("absorbed well before the cap");
            for (t, count) in died_by.iter_mut().enumerate() {
                if date <= t as u64 + 1 {
                    *count += 1;
                }
            }
        }
        for (t, &count) in died_by.iter().enumerate() {
            let expected = 1.0 - 0.5f64.powi(t as i32 + 1);
            let freq = count as f64 / runs as f64;
            assert!((freq - expected).abs() < 0.03, "t = {}", t + 1);
        }
    }

    #[test]
    fn missing_cap_without_extinction() {
        let (path, u) = unit();
        let p = HazardParams::new(0.5, 0.0, 0.0).unwrap();
        assert_eq!(
            abm_population_run(&p, 1, &path, &u, &SimulationConfig::new(1, 0)),
            Err(Error::MissingHorizonCap)
        );
    }

    #[test]
    fn bernoulli_pair_mean_births() {
        let mut rng = stream_rng(5, 0);
        let n = 20_000;
        let total: u64 = (0..n).map(|_| births(OffspringLaw::BernoulliPair, 0.3, 7, &mut rng)).sum();
        let mean = total as f64 / n as f64;
        assert!((mean - 2.1).abs() < 0.05);
        let p = HazardParams::new(0.1, 0.1, 1.5).unwrap();
        assert!(check_law(OffspringLaw::BernoulliPair, &p).is_err());
    }

    #[test]
    fn founders_must_be_whole() {
        let p = HazardParams::new(0.1, 0.1, 0.1).unwrap().with_n0(2.5).unwrap();
        assert!(integer_founders(&p).is_err());
        assert_eq!(integer_founders(&p.with_n0(3.0).unwrap()).unwrap(), 3);
    }
}
