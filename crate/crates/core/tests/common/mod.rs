//! Independent oracles shared by the integration tests. Nothing here calls
//! the series engine.
#![allow(dead_code)]

use extinction_discount::analytic::{eu_known_extinction, welfare_window};
use extinction_discount::model::{extinction_pmf, ConsumptionPath, HazardParams, Utility};

/// `sum_{t<n} weight(t) u(c_t)`, naive left-to-right summation. Stops early
/// once the weight underflows or `c_t` leaves the representable range.
pub fn brute_sum(weight: impl Fn(u64) -> f64, path: &ConsumptionPath, u: &Utility, n: u64) -> f64 {
    (0..n)
        .map(|t| (weight(t), u.eval(path.at(t))))
        .take_while(|&(w, v)| w > 0.0 && v.is_finite())
        .map(|(w, v)| w * v)
        .sum()
}

/// `sum_T P_X(T) EU_0 | T` truncated where the omitted mass is below `1e-13`.
pub fn total_expectation(params: &HazardParams, path: &ConsumptionPath, u: &Utility) -> f64 {
    let m = params.mortality();
    let big_m = params.extinction();
    assert!(m > 0.0 && big_m > 0.0);
    // sup_T |EU_0 | T| <= sum_t (1-m)^t |u(c_t)|
    let sup: f64 = (0..200_000u64)
        .map(|t| (1.0 - m).powi(t as i32) * u.eval(path.at(t)).abs())
        .take_while(|x| x.is_finite())
        .sum();
    let mut total = 0.0;
    let mut date = 0;
    while (1.0 - big_m).powf((date + 1) as f64) * sup > 1e-13 {
        total += extinction_pmf(big_m, date) * eu_known_extinction(m, date, path, u).unwrap();
        date += 1;
    }
    total + extinction_pmf(big_m, date) * eu_known_extinction(m, date, path, u).unwrap()
}

/// `sum_{T<=K} P_X(T) W(0, T)` and a bound on the omitted terms, for a path
/// with `|u(c_t)| <= u_max`.
pub fn welfare_mixture(
    params: &HazardParams,
    path: &ConsumptionPath,
    u: &Utility,
    u_max: f64,
    tail_target: f64,
) -> (f64, f64) {
    let big_m = params.extinction();
    let b = params.birth();
    let r = (1.0 - big_m) * params.gross_growth().max(1.0);
    assert!(r < 1.0);
    let scale = params.n0() * (1.0 + b) / b * u_max * big_m;
    // sum_{T>=s} (T+1) r^T = r^s ((s+1)/(1-r) + r/(1-r)^2)
    let tail = |s: u64| {
        let sf = s as f64;
        scale * r.powf(sf) * ((sf + 1.0) / (1.0 - r) + r / ((1.0 - r) * (1.0 - r)))
    };
    let mut k = 0;
    while tail(k + 1) > tail_target {
        k += 1;
    }
    let value = (0..=k)
        .map(|date| extinction_pmf(big_m, date) * welfare_window(params, date, path, u).unwrap())
        .sum();
    (value, tail(k + 1))
}
