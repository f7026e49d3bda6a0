use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::HazardParams;

/// Time-varying discount factor of the social-welfare series.
///
/// `ratios[t] = w_{t+1} / w_t = L (1 - q^(t+2)) / (1 - q^(t+1))` with
/// `q = 1/(1+b)` and long-run factor `L = (1-M)(1-m)(1+b)`. The excess
/// `ratios[t] - L = L q^(t+1) (1-q) / (1 - q^(t+1))` is stored separately
/// because it stays resolvable long after `ratios[t]` rounds to `L`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiscountProfile {
    pub ratios: Vec<f64>,
    pub excess: Vec<f64>,
    pub long_run: f64,
}

/// Profile for `t = 0..horizon`; requires `b > 0`.
pub fn discount_profile(params: &HazardParams, horizon: u64) -> Result<DiscountProfile> {
    let b = params.birth();
    if b == 0.0 {
        return Err(Error::ZeroBirthRate);
    }
    let long_run = (1.0 - params.extinction()) * (1.0 - params.mortality()) * (1.0 + b);
    let log_q = -b.ln_1p();
    let one_minus_q = -log_q.exp_m1();
    let excess: Vec<f64> = (0..horizon)
        .map(|t| {
            let k = (t + 1) as f64;
            let q_k = (k * log_q).exp();
            long_run * q_k * one_minus_q / -(k * log_q).exp_m1()
        })
        .collect();
    let ratios = excess.iter().map(|e| long_run + e).collect();
    Ok(DiscountProfile { ratios, excess, long_run })
}
