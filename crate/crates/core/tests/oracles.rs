mod common;

use common::{brute_sum, total_expectation, welfare_mixture};
use extinction_discount::analytic::{
    eg_lineage, eu_individual, ev_dynasty, ev_dynasty_theta, ew_social, ew_social_zero_growth,
    series_weight, welfare_window, welfare_window_direct, ScenarioCase, DEFAULT_TOLERANCE,
};
use extinction_discount::model::{
    lifetime_cdf, lifetime_pmf, lifetime_pmf_known_date, ConsumptionPath, HazardParams,
    LifetimeSampler, TailRule, Utility,
};
use extinction_discount::simulation::stream_rng;

fn p(m: f64, big_m: f64, b: f64) -> HazardParams {
    HazardParams::new(m, big_m, b).unwrap()
}

#[test]
fn individual_log_utility_growing_path() {
    let params = p(0.02, 0.01, 0.0);
    let path = ConsumptionPath::geometric(100.0, 1.01).unwrap();
    let r = eu_individual(&params, &path, &Utility::Log, DEFAULT_TOLERANCE).unwrap();
    let brute = brute_sum(|t| 0.9702f64.powi(t as i32), &path, &Utility::Log, 10_000);
    assert!(r.converged);
    assert!((r.value - brute).abs() < 1e-9, "{} vs {}", r.value, brute);
}

#[test]
fn lineage_brute_force() {
    let params = p(0.02, 0.01, 0.03).with_alpha(0.5).unwrap();
    let path = ConsumptionPath::constant(1.0).unwrap();
    let r = eg_lineage(&params, &path, &Utility::Linear, DEFAULT_TOLERANCE).unwrap();
    let ratio: f64 = 0.99 * 0.98 * 1.03f64.sqrt();
    let brute: f64 = (0..10_000).map(|t| ratio.powi(t)).sum();
    assert!((r.value - brute).abs() < 1e-9);
    assert!((r.value - 1.0 / (1.0 - ratio)).abs() < 1e-8);
}

#[test]
fn converged_results_are_within_their_tail_bound() {
    let paths = [
        ConsumptionPath::constant(2.0).unwrap(),
        ConsumptionPath::geometric(50.0, 1.02).unwrap(),
        ConsumptionPath::new(vec![0.5, 3.0, 1.5, 4.0], TailRule::Geometric(0.97)).unwrap(),
    ];
    let utils = [Utility::Log, Utility::Linear, Utility::Crra { sigma: 2.0 }];
    let params = p(0.05, 0.03, 0.04).with_theta(0.6).unwrap().with_alpha(0.4).unwrap();
    for path in &paths {
        for u in &utils {
            for case in [
                ScenarioCase::Individual,
                ScenarioCase::Dynasty,
                ScenarioCase::DynastyTheta,
                ScenarioCase::Lineage,
                ScenarioCase::SocialWelfare,
            ] {
                let r = match case {
                    ScenarioCase::Individual => eu_individual(&params, path, u, 1e-8),
                    ScenarioCase::Dynasty => ev_dynasty(&params, path, u, 1e-8),
                    ScenarioCase::DynastyTheta => ev_dynasty_theta(&params, path, u, 1e-8),
                    ScenarioCase::Lineage => eg_lineage(&params, path, u, 1e-8),
                    _ => ew_social(&params, path, u, 1e-8),
                };
                let Ok(r) = r else { continue };
                assert!(r.converged);
                let n = 10 * (r.truncation_index + 1);
                let long = brute_sum(|t| series_weight(case, &params, t), path, u, n);
                assert!(
                    (long - r.value).abs() <= r.tail_bound + 1e-12 * long.abs().max(1.0),
                    "{case} {u:?} {path:?}: diff {} bound {}",
                    (long - r.value).abs(),
                    r.tail_bound
                );
            }
        }
    }
}

#[test]
fn reduction_lattice() {
    let path = ConsumptionPath::new(vec![1.0, 2.0, 3.0], TailRule::Geometric(1.005)).unwrap();
    let u = Utility::Log;
    let eps = DEFAULT_TOLERANCE;
    for &(m, big_m) in &[(0.02, 0.01), (0.1, 0.05), (0.3, 0.001)] {
        let no_births = p(m, big_m, 0.0).with_alpha(0.7).unwrap();
        let individual = eu_individual(&no_births, &path, &u, eps).unwrap().value;
        assert_eq!(ev_dynasty(&no_births, &path, &u, eps).unwrap().value, individual);
        assert_eq!(eg_lineage(&no_births, &path, &u, eps).unwrap().value, individual);

        let params = p(m, big_m, 0.02).with_theta(1.0).unwrap();
        assert_eq!(
            ev_dynasty_theta(&params, &path, &u, eps).unwrap().value,
            ev_dynasty(&params, &path, &u, eps).unwrap().value
        );

        let theta0 = params.with_theta(0.0).unwrap();
        let expected = brute_sum(|t| (1.0 - big_m).powi(t as i32), &path, &u, 200_000);
        let got = ev_dynasty_theta(&theta0, &path, &u, eps).unwrap().value;
        assert!((got - expected).abs() < 1e-8 * expected.abs().max(1.0));

        let dynasty = ev_dynasty(&params, &path, &u, eps).unwrap().value;
        let mut prev_gap = f64::INFINITY;
        for delta in [1e-2, 1e-4, 1e-6, 1e-9] {
            let near = params.with_alpha(1.0 - delta).unwrap();
            let gap = (eg_lineage(&near, &path, &u, eps).unwrap().value - dynasty).abs();
            assert!(gap <= prev_gap);
            prev_gap = gap;
        }
        assert!(prev_gap <= 1e-6 * dynasty.abs());
    }
}

#[test]
fn law_of_total_expectation() {
    let combos = [
        (p(0.02, 0.01, 0.0), ConsumptionPath::constant(1.0).unwrap(), Utility::Linear),
        (p(0.05, 0.02, 0.0), ConsumptionPath::geometric(100.0, 1.01).unwrap(), Utility::Log),
        (
            p(0.1, 0.05, 0.0),
            ConsumptionPath::new(vec![2.0, 1.0, 4.0], TailRule::Constant).unwrap(),
            Utility::Crra { sigma: 2.0 },
        ),
        (p(0.01, 0.03, 0.0), ConsumptionPath::geometric(3.0, 0.99).unwrap(), Utility::Log),
        (p(0.2, 0.1, 0.0), ConsumptionPath::constant(5.0).unwrap(), Utility::Crra { sigma: 0.5 }),
    ];
    for (params, path, u) in &combos {
        let analytic = eu_individual(params, path, u, 1e-12).unwrap().value;
        let mixture = total_expectation(params, path, u);
        assert!((analytic - mixture).abs() < 1e-9, "{analytic} vs {mixture}");
    }
}

#[test]
fn welfare_window_closed_form_matches_definition() {
    let paths = [
        ConsumptionPath::constant(1.0).unwrap(),
        ConsumptionPath::new(vec![1.0, 3.0, 2.0, 5.0], TailRule::Geometric(1.01)).unwrap(),
    ];
    for path in &paths {
        for u in [Utility::Linear, Utility::Log] {
            for params in [
                p(0.02, 0.01, 0.03),
                p(0.1, 0.2, 0.5).with_n0(10.0).unwrap(),
                HazardParams::zero_growth(0.05, 0.01).unwrap(),
            ] {
                for date in [0u64, 1, 3, 17, 60] {
                    let closed = welfare_window(&params, date, path, &u).unwrap();
                    let direct = welfare_window_direct(&params, date, path, &u).unwrap();
                    let scale = direct.abs().max(1e-300);
                    assert!(
                        (closed - direct).abs() <= 1e-10 * scale.max(1.0),
                        "T={date}: {closed} vs {direct}"
                    );
                }
            }
        }
    }
}

#[test]
fn welfare_window_small_case_by_hand() {
    // N0 = 1, b = 0.03, m = 0.02, T = 3, u = 1
    let params = p(0.02, 0.01, 0.03);
    let path = ConsumptionPath::constant(1.0).unwrap();
    let gross: f64 = 1.03 * 0.98;
    let mut hand = 0.0;
    for t in 0..=3 {
        let size = gross.powi(t);
        let remaining: f64 = (t..=3).map(|tau| 0.98f64.powi(tau - t)).sum();
        hand += size * remaining;
    }
    let closed = welfare_window(&params, 3, &path, &Utility::Linear).unwrap();
    assert!((closed - hand).abs() < 1e-12);
}

#[test]
fn social_welfare_forms_agree() {
    let path = ConsumptionPath::constant(1.0).unwrap();
    for &(m, big_m, n0) in &[(0.02, 0.01, 1.0), (0.05, 0.03, 2.0), (0.2, 0.1, 100.0)] {
        let params = HazardParams::zero_growth(m, big_m).unwrap().with_n0(n0).unwrap();
        let general = ew_social(&params, &path, &Utility::Linear, 1e-12).unwrap().value;
        let simple = ew_social_zero_growth(&params, &path, &Utility::Linear, 1e-12).unwrap().value;
        // two geometric series: (N0/m) [1/M - (1-m)/(1-(1-M)(1-m))]
        let oracle = n0 / m * (1.0 / big_m - (1.0 - m) / (1.0 - (1.0 - big_m) * (1.0 - m)));
        assert!((general - oracle).abs() <= 1e-10 * oracle);
        assert!((simple - oracle).abs() <= 1e-10 * oracle);
    }
}

#[test]
fn social_welfare_matches_mixture_definition() {
    let path = ConsumptionPath::constant(2.0).unwrap();
    let u = Utility::Linear;
    for params in [p(0.02, 0.05, 0.03), p(0.1, 0.02, 0.05).with_n0(3.0).unwrap()] {
        let general = ew_social(&params, &path, &u, 1e-11).unwrap();
        let (mixture, tail) = welfare_mixture(&params, &path, &u, 2.0, 1e-11);
        let allowed = general.tail_bound + tail + 1e-12 * mixture.abs();
        assert!((general.value - mixture).abs() <= allowed);
    }
}

#[test]
fn lifetime_pmf_normalizes_with_analytic_tail() {
    for &(m, big_m) in &[(0.02, 0.01), (0.0, 0.3), (0.5, 0.0), (0.9, 0.9), (1e-4, 2e-4)] {
        let params = p(m, big_m, 0.0);
        let k = 500u64;
        let head: f64 = (0..=k).map(|t| lifetime_pmf(&params, t)).sum();
        let tail = 1.0 - lifetime_cdf(&params, k);
        assert!((head + tail - 1.0).abs() < 1e-12, "m={m} M={big_m}");
    }
}

#[test]
fn known_date_pmf_normalizes() {
    for &m in &[0.0, 0.02, 0.5, 1.0] {
        for date in [0u64, 1, 7, 250] {
            let s: f64 = (0..=date).map(|t| lifetime_pmf_known_date(m, date, t).unwrap()).sum();
            assert!((s - 1.0).abs() < 1e-12, "m={m} T={date}");
        }
    }
}

#[test]
fn sampled_lifetimes_follow_the_pmf() {
    let params = p(0.02, 0.01, 0.0);
    let sampler = LifetimeSampler::new(&params).unwrap();
    let n = 1_000_000usize;
    let mut rng = stream_rng(2024, 0);
    let mut counts = vec![0u64; 4000];
    for _ in 0..n {
        let d = sampler.sample(&mut rng) as usize;
        if d < counts.len() {
            counts[d] += 1;
        }
    }
    let p0 = counts[0] as f64 / n as f64;
    let se = (0.0298f64 * (1.0 - 0.0298) / n as f64).sqrt();
    assert!((p0 - 0.0298).abs() < 3.0 * se);

    let mut cum = 0u64;
    let mut max_dev: f64 = 0.0;
    for (t, &c) in counts.iter().enumerate() {
        cum += c;
        let dev = (cum as f64 / n as f64 - lifetime_cdf(&params, t as u64)).abs();
        max_dev = max_dev.max(dev);
    }
    assert!(max_dev < 4.0 / (n as f64).sqrt(), "max deviation {max_dev}");
}
