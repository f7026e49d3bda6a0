//! Lifetime and extinction-date laws.
//!
//! Both are geometric in discrete time. The unconditional lifetime `D` of an
//! individual born at `t = 0` is the minimum of the extinction date `T` and an
//! idiosyncratic geometric death date; when `T` is known, `D` is the natural
//! death date censored at `T`.

use rand::Rng;
use rand_distr::{Distribution, Geometric};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::params::HazardParams;

/// `x^t` for a nonnegative integer exponent.
pub(crate) fn pow(x: f64, t: u64) -> f64 {
    x.powf(t as f64)
}

/// `P(D = t) = (1-m)^t (1-M)^t (M + m - Mm)`.
///
/// Degenerate parameters (`m = M = 0`) give 0 for every `t`; check
/// [`HazardParams::is_degenerate`] before treating the result as a law.
pub fn lifetime_pmf(params: &HazardParams, t: u64) -> f64 {
    let survive = (1.0 - params.mortality()) * (1.0 - params.extinction());
    pow(survive, t) * params.death_hazard()
}

/// `P(D <= t)` under the unconditional lifetime law.
pub fn lifetime_cdf(params: &HazardParams, t: u64) -> f64 {
    let survive = (1.0 - params.mortality()) * (1.0 - params.extinction());
    1.0 - pow(survive, t + 1)
}

/// Lifetime law when extinction is known to strike at `extinction_date`.
pub fn lifetime_pmf_known_date(mortality: f64, extinction_date: u64, t: u64) -> Result<f64> {
    if !(0.0..=1.0).contains(&mortality) {
        return Err(Error::InvalidParameter {
            name: "m",
            value: mortality,
            reason: "must be a probability in [0, 1]",
        });
    }
    if t > extinction_date {
        return Err(Error::AfterExtinction { t, extinction_date });
    }
    let alive = pow(1.0 - mortality, t);
    Ok(if t < extinction_date { alive * mortality } else { alive })
}

/// `P_X(T) = (1-M)^T M`.
pub fn extinction_pmf(extinction: f64, date: u64) -> f64 {
    pow(1.0 - extinction, date) * extinction
}

/// `P(T > date) = (1-M)^(date+1)`.
pub fn extinction_survival(extinction: f64, date: u64) -> f64 {
    pow(1.0 - extinction, date + 1)
}

/// Lifetime law as a value, with or without a known extinction date.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LifetimePmf {
    pub params: HazardParams,
    pub extinction_date: Option<u64>,
}

impl LifetimePmf {
    pub fn pmf(&self, t: u64) -> Result<f64> {
        match self.extinction_date {
            None => Ok(lifetime_pmf(&self.params, t)),
            Some(date) => lifetime_pmf_known_date(self.params.mortality(), date, t),
        }
    }
}

/// Extinction-date law.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ExtinctionPmf {
    pub extinction: f64,
}

impl ExtinctionPmf {
    pub fn pmf(&self, date: u64) -> f64 {
        extinction_pmf(self.extinction, date)
    }
}

/// Geometric sampler on `{0, 1, ...}`; `None` stands for "never" (hazard 0).
#[derive(Debug, Clone, Copy)]
pub struct GeometricDate {
    dist: Option<Geometric>,
}

impl GeometricDate {
    pub fn new(hazard: f64) -> Result<Self> {
        if !(0.0..=1.0).contains(&hazard) {
            return Err(Error::InvalidParameter {
                name: "hazard",
                value: hazard,
                reason: "must be a probability in [0, 1]",
            });
        }
        let dist = if hazard > 0.0 {
            Some(Geometric::new(hazard).expect("hazard checked"))
        } else {
            None
        };
        Ok(GeometricDate { dist })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> Option<u64> {
        self.dist.as_ref().map(|d| d.sample(rng))
    }
}

/// Draws lifetimes `D = min(T, D')` with `T ~ Geometric(M)` and
/// `D' ~ Geometric(m)`.
#[derive(Debug, Clone, Copy)]
pub struct LifetimeSampler {
    death: GeometricDate,
    extinction: GeometricDate,
}

impl LifetimeSampler {
    pub fn new(params: &HazardParams) -> Result<Self> {
        if params.is_degenerate() {
            return Err(Error::Degenerate);
        }
        Ok(LifetimeSampler {
            death: GeometricDate::new(params.mortality())?,
            extinction: GeometricDate::new(params.extinction())?,
        })
    }

    pub fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> u64 {
        let extinction = self.extinction.sample(rng);
        let death = self.death.sample(rng);
        match (extinction, death) {
            (Some(a), Some(b)) => a.min(b),
            (Some(a), None) | (None, Some(a)) => a,
            (None, None) => unreachable!("degenerate hazards rejected at construction"),
        }
    }
}

/// One lifetime draw; see [`LifetimeSampler`] for repeated sampling.
pub fn sample_lifetime<R: Rng + ?Sized>(params: &HazardParams, rng: &mut R) -> Result<u64> {
    Ok(LifetimeSampler::new(params)?.sample(rng))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn params(m: f64, big_m: f64) -> HazardParams {
        HazardParams::new(m, big_m, 0.0).unwrap()
    }

    #[test]
    fn lifetime_pmf_examples() {
        let p = params(0.02, 0.01);
        assert!((lifetime_pmf(&p, 0) - 0.0298).abs() < 1e-15);
        let expected = 0.0298 * (0.98f64 * 0.99).powi(2);
        assert!((lifetime_pmf(&p, 2) - expected).abs() < 1e-15);
        assert!((lifetime_pmf(&p, 2) - 0.028050).abs() < 1e-6);
        assert_eq!(lifetime_pmf(&params(0.0, 0.0), 5), 0.0);
    }

    #[test]
    fn known_date_examples() {
        assert_eq!(lifetime_pmf_known_date(0.5, 1, 0).unwrap(), 0.5);
        assert_eq!(lifetime_pmf_known_date(0.5, 1, 1).unwrap(), 0.5);
        assert_eq!(lifetime_pmf_known_date(0.02, 0, 0).unwrap(), 1.0);
        let total: f64 = (0..=3).map(|t| lifetime_pmf_known_date(0.1, 3, t).unwrap()).sum();
        assert!((total - 1.0).abs() < 1e-15);
        assert_eq!(
            lifetime_pmf_known_date(0.1, 3, 4),
            Err(Error::AfterExtinction { t: 4, extinction_date: 3 })
        );
    }

    #[test]
    fn extinction_pmf_examples() {
        assert_eq!(extinction_pmf(0.01, 0), 0.01);
        assert_eq!(extinction_pmf(0.0, 10), 0.0);
        assert!((extinction_pmf(0.2, 2) - 0.128).abs() < 1e-15);
    }

    #[test]
    fn pmf_value_type() {
        let law = LifetimePmf { params: params(0.1, 0.0), extinction_date: Some(2) };
        assert!((law.pmf(2).unwrap() - 0.81).abs() < 1e-15);
        let law = LifetimePmf { params: params(0.1, 0.0), extinction_date: None };
        assert!((law.pmf(0).unwrap() - 0.1).abs() < 1e-15);
        assert_eq!(ExtinctionPmf { extinction: 0.5 }.pmf(1), 0.25);
    }

    #[test]
    fn sampler_edge_cases() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        let certain = params(1.0, 0.0);
        assert!((0..1000).all(|_| sample_lifetime(&certain, &mut rng).unwrap() == 0));
        assert_eq!(sample_lifetime(&params(0.0, 0.0), &mut rng), Err(Error::Degenerate));
    }

    #[test]
    fn only_extinction_kills() {
        let mut rng = ChaCha8Rng::seed_from_u64(2);
        let sampler = LifetimeSampler::new(&params(0.0, 0.5)).unwrap();
        let n = 200_000;
        let zeros = (0..n).filter(|_| sampler.sample(&mut rng) == 0).count();
        let freq = zeros as f64 / n as f64;
        let se = (0.25f64 / n as f64).sqrt();
        assert!((freq - 0.5).abs() < 4.0 * se);
    }
}
