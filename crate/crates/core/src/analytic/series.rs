use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::distribution::pow;
use crate::model::{ConsumptionPath, Utility};

/// Default absolute tolerance for truncated series.
pub const DEFAULT_TOLERANCE: f64 = 1e-10;

/// Hard cap on the number of evaluated terms.
pub const MAX_TERMS: u64 = 1_000_000;

/// Value of a truncated infinite series together with a rigorous bound on the
/// omitted tail.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SeriesResult {
    pub value: f64,
    /// Index of the last summed term.
    pub truncation_index: u64,
    pub tail_bound: f64,
    pub converged: bool,
}

impl SeriesResult {
    pub fn exact(value: f64, truncation_index: u64) -> Self {
        SeriesResult { value, truncation_index, tail_bound: 0.0, converged: true }
    }
}

/// Neumaier compensated summation.
#[derive(Debug, Clone, Copy, Default)]
pub(crate) struct CompensatedSum {
    sum: f64,
    carry: f64,
}

impl CompensatedSum {
    pub fn add(&mut self, x: f64) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.carry += (self.sum - t) + x;
        } else {
            self.carry += (x - t) + self.sum;
        }
        self.sum = t;
    }

    pub fn value(&self) -> f64 {
        self.sum + self.carry
    }
}

impl FromIterator<f64> for CompensatedSum {
    fn from_iter<I: IntoIterator<Item = f64>>(iter: I) -> Self {
        let mut s = CompensatedSum::default();
        for x in iter {
            s.add(x);
        }
        s
    }
}

/// Series weights `w_t` with a geometric envelope `w_t <= scale * ratio^t`.
pub(crate) struct Weights<F> {
    pub weight: F,
    pub scale: f64,
    pub ratio: f64,
}

/// Bound on `sum_{j>=1} ratio^j |u(c g^j)|`, or `None` if it diverges.
fn tail_factor(u: &Utility, c: f64, g: f64, ratio: f64) -> Option<f64> {
    let env = u.tail_envelope(c, g);
    let mut total = 0.0;
    for (a, growth) in env.geometric {
        if a == 0.0 {
            continue;
        }
        let r = ratio * growth;
        if r >= 1.0 {
            return None;
        }
        total += a * r / (1.0 - r);
    }
    if env.slope > 0.0 {
        if ratio >= 1.0 {
            return None;
        }
        total += env.slope * ratio / ((1.0 - ratio) * (1.0 - ratio));
    }
    Some(total)
}

/// Sums `sum_t w_t u(c_t)` until the tail bound drops to `tolerance`.
pub(crate) fn sum_series<F: Fn(u64) -> f64>(
    label: &str,
    weights: Weights<F>,
    path: &ConsumptionPath,
    u: &Utility,
    tolerance: f64,
) -> Result<SeriesResult> {
    u.validate()?;
    if !(tolerance > 0.0) {
        return Err(Error::InvalidParameter {
            name: "tolerance",
            value: tolerance,
            reason: "must be > 0",
        });
    }
    if weights.ratio >= 1.0 {
        return Err(Error::Divergent { case: label.to_string(), factor: weights.ratio });
    }
    let g = path.tail_ratio();
    let last = path.last_index();
    if tail_factor(u, path.at(last), g, weights.ratio).is_none() {
        return Err(Error::UnsummableTail {
            weight_ratio: weights.ratio,
            utility_growth: g,
        });
    }

    let mut acc = CompensatedSum::default();
    let mut tail_bound = f64::INFINITY;
    let mut t = 0;
    loop {
        let c = path.at(t);
        acc.add((weights.weight)(t) * u.eval(c));
        if t >= last {
            let factor = tail_factor(u, c, g, weights.ratio).expect("summability checked");
            tail_bound = weights.scale * pow(weights.ratio, t) * factor;
            if tail_bound <= tolerance {
                return Ok(SeriesResult {
                    value: acc.value(),
                    truncation_index: t,
                    tail_bound,
                    converged: true,
                });
            }
        }
        if t + 1 >= MAX_TERMS {
            return Ok(SeriesResult {
                value: acc.value(),
                truncation_index: t,
                tail_bound,
                converged: false,
            });
        }
        t += 1;
    }
}
