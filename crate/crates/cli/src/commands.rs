//! One function per subcommand. Each returns its artifacts without touching
//! the filesystem.

use extinction_discount::analysis::{
    belief_update_response, discount_profile, factor_from_weights, scenario_sweep,
    table_factor, table_factor_zero_growth, weight_ratios, BeliefResponse, Regime, RowStatus,
    SweepRow,
};
use extinction_discount::analytic::{evaluate, ScenarioCase, SeriesResult};
use extinction_discount::model::{ConsumptionPath, HazardParams, Utility};
use extinction_discount::simulation::{
    abm_study, mc_eg_lineage, mc_eu_individual, mc_ev_dynasty, mc_ew_social, AbmSummary,
    SimEstimate, SimMode, SimulationConfig,
};
use extinction_discount::Error;
use serde::{Deserialize, Serialize};

use crate::config::RunConfig;
use crate::output::{num, opt_num, to_json, Artifact, Table};

/// Artifacts of one command plus what the caller needs for exit codes.
pub struct Outcome {
    pub artifacts: Vec<Artifact>,
    pub divergent: usize,
    pub messages: Vec<String>,
}

impl Outcome {
    fn single(artifact: Artifact, divergent: usize) -> Self {
        Outcome { artifacts: vec![artifact], divergent, messages: Vec::new() }
    }
}

const PARAM_HEADER: [&str; 7] = ["m", "M", "b", "theta", "alpha", "n0", "n"];

fn header(front: &[&'static str], back: &[&'static str]) -> Vec<&'static str> {
    front.iter().chain(PARAM_HEADER.iter()).chain(back).copied().collect()
}

fn param_cells(p: &HazardParams) -> Vec<String> {
    [p.mortality(), p.extinction(), p.birth(), p.theta(), p.alpha(), p.n0(), p.growth()]
        .into_iter()
        .map(num)
        .collect()
}

fn row(front: Vec<String>, p: &HazardParams, back: Vec<String>) -> Vec<String> {
    front.into_iter().chain(param_cells(p)).chain(back).collect()
}

fn status_cells(status: &RowStatus) -> [String; 2] {
    match status {
        RowStatus::Ok => ["ok".into(), String::new()],
        RowStatus::Divergent => ["divergent".into(), String::new()],
        RowStatus::Undefined(reason) => ["undefined".into(), reason.clone()],
    }
}

fn classify(e: Error) -> RowStatus {
    match e {
        Error::Divergent { .. } | Error::UnsummableTail { .. } | Error::Degenerate => {
            RowStatus::Divergent
        }
        other => RowStatus::Undefined(other.to_string()),
    }
}

fn series_cells(s: Option<&SeriesResult>) -> Vec<String> {
    vec![
        opt_num(s.map(|s| s.value)),
        opt_num(s.map(|s| s.tail_bound)),
        s.map(|s| s.truncation_index.to_string()).unwrap_or_default(),
        s.map(|s| s.converged.to_string()).unwrap_or_default(),
    ]
}

fn sweep_rows(cfg: &RunConfig, grid: &[HazardParams]) -> Vec<SweepRow> {
    scenario_sweep(grid, &cfg.cases, &cfg.path, &cfg.utility, cfg.tolerance)
}

/// Analytic value of every case at every point.
pub fn eval(cfg: &RunConfig, grid: &[HazardParams]) -> Outcome {
    let rows = sweep_rows(cfg, grid);
    let mut table = Table::new(header(
        &["point", "case"],
        &["status", "reason", "value", "tail_bound", "truncation_index", "converged"],
    ));
    for r in &rows {
        let [status, reason] = status_cells(&r.status);
        let mut back = vec![status, reason];
        back.extend(series_cells(r.series.as_ref()));
        table.push(row(vec![r.point.to_string(), r.case.to_string()], &r.params, back));
    }
    let divergent = rows.iter().filter(|r| r.is_divergent()).count();
    Outcome::single(Artifact { stem: "eval", table, json: to_json(&rows) }, divergent)
}

/// Discount factors, finiteness checks and analytic values.
pub fn sweep(cfg: &RunConfig, grid: &[HazardParams]) -> Outcome {
    let rows = sweep_rows(cfg, grid);
    let mut table = Table::new(header(
        &["point", "case"],
        &[
            "factor",
            "constant",
            "rate_simple",
            "rate_log",
            "factor_n0",
            "finiteness_product",
            "finite",
            "status",
            "reason",
            "value",
            "tail_bound",
            "truncation_index",
            "converged",
        ],
    ));
    for r in &rows {
        let rep = &r.report;
        let [status, reason] = status_cells(&r.status);
        let mut back = vec![
            num(rep.factor),
            rep.constant.to_string(),
            num(rep.rate_simple),
            num(rep.rate_log),
            num(rep.factor_n0),
            num(r.finiteness.product),
            r.finiteness.finite.to_string(),
            status,
            reason,
        ];
        back.extend(series_cells(r.series.as_ref()));
        table.push(row(vec![r.point.to_string(), r.case.to_string()], &r.params, back));
    }
    let divergent = rows.iter().filter(|r| r.is_divergent()).count();
    Outcome::single(Artifact { stem: "sweep", table, json: to_json(&rows) }, divergent)
}

/// Monte Carlo estimator matching the case's analytic functional.
pub fn mc_estimate(
    case: ScenarioCase,
    p: &HazardParams,
    path: &ConsumptionPath,
    u: &Utility,
    sim: &SimulationConfig,
) -> extinction_discount::Result<SimEstimate> {
    match case {
        ScenarioCase::Individual => mc_eu_individual(p, path, u, sim),
        ScenarioCase::Dynasty => mc_ev_dynasty(p, path, u, 1.0, sim),
        ScenarioCase::DynastyTheta => mc_ev_dynasty(p, path, u, p.theta(), sim),
        ScenarioCase::Lineage => mc_eg_lineage(p, path, u, sim),
        ScenarioCase::SocialWelfare => mc_ew_social(p, path, u, sim),
        ScenarioCase::KnownExtinction(_) => {
            Err(Error::UnsupportedMode("no estimator for a known extinction date"))
        }
    }
}

/// Seed of one `(point, case)` comparison, distinct across the grid.
pub fn row_seed(seed: u64, point: usize, case_index: usize) -> u64 {
    seed.wrapping_add(((point as u64) << 8) | case_index as u64)
}

/// Standardized distance of the estimate from the analytic value.
pub fn z_score(est: &SimEstimate, analytic: f64) -> f64 {
    let diff = est.mean - analytic;
    if est.standard_error > 0.0 {
        diff / est.standard_error
    } else if diff == 0.0 {
        0.0
    } else {
        diff.signum() * f64::INFINITY
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SimRow {
    pub point: usize,
    pub case: ScenarioCase,
    pub params: HazardParams,
    pub mode: SimMode,
    pub seed: u64,
    pub analytic: Option<SeriesResult>,
    pub estimate: Option<SimEstimate>,
    pub within_3se: Option<bool>,
    pub status: RowStatus,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AbmRow {
    pub point: usize,
    pub params: HazardParams,
    pub summary: Option<AbmSummary>,
    pub status: RowStatus,
}

/// Monte Carlo estimates against the analytic values; in agent-based mode
/// also the agent-based welfare study at every point.
pub fn simulate(cfg: &RunConfig, grid: &[HazardParams], sim: &SimulationConfig) -> Outcome {
    let mut rows = Vec::new();
    for (i, p) in grid.iter().enumerate() {
        for (k, &case) in cfg.cases.iter().enumerate() {
            let mut local = sim.clone();
            local.seed = row_seed(sim.seed, i, k);
            let analytic = evaluate(case, p, &cfg.path, &cfg.utility, cfg.tolerance);
            let estimate = mc_estimate(case, p, &cfg.path, &cfg.utility, &local);
            let (status, analytic, estimate) = match (analytic, estimate) {
                (Ok(a), Ok(e)) => (RowStatus::Ok, Some(a), Some(e)),
                (Err(e), _) | (_, Err(e)) => (classify(e), None, None),
            };
            let within_3se = match (&analytic, &estimate) {
                (Some(a), Some(e)) => Some(e.agrees_with(a.value, 3.0)),
                _ => None,
            };
            rows.push(SimRow {
                point: i,
                case,
                params: *p,
                mode: local.mode,
                seed: local.seed,
                analytic,
                estimate,
                within_3se,
                status,
            });
        }
    }

    let mut table = Table::new(header(
        &["point", "case"],
        &[
            "mode",
            "seed",
            "status",
            "reason",
            "analytic",
            "mean",
            "standard_error",
            "replications",
            "truncated_mass",
            "z",
            "within_3se",
        ],
    ));
    for r in &rows {
        let [status, reason] = status_cells(&r.status);
        let e = r.estimate.as_ref();
        let z = match (&r.analytic, e) {
            (Some(a), Some(e)) => num(z_score(e, a.value)),
            _ => String::new(),
        };
        table.push(row(
            vec![r.point.to_string(), r.case.to_string()],
            &r.params,
            vec![
                mode_name(r.mode).into(),
                r.seed.to_string(),
                status,
                reason,
                opt_num(r.analytic.map(|a| a.value)),
                opt_num(e.map(|e| e.mean)),
                opt_num(e.map(|e| e.standard_error)),
                e.map(|e| e.replications.to_string()).unwrap_or_default(),
                opt_num(e.map(|e| e.truncated_mass)),
                z,
                r.within_3se.map(|w| w.to_string()).unwrap_or_default(),
            ],
        ));
    }
    let divergent = rows.iter().filter(|r| r.status == RowStatus::Divergent).count();
    let mut artifacts = vec![Artifact { stem: "simulate", table, json: to_json(&rows) }];
    if sim.mode == SimMode::AgentBased {
        artifacts.push(abm_artifact(cfg, grid, sim));
    }
    Outcome { artifacts, divergent, messages: Vec::new() }
}

fn mode_name(mode: SimMode) -> &'static str {
    match mode {
        SimMode::Smoothed => "smoothed",
        SimMode::AgentBased => "agent-based",
    }
}

fn abm_artifact(cfg: &RunConfig, grid: &[HazardParams], sim: &SimulationConfig) -> Artifact {
    let rows: Vec<AbmRow> = grid
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let founders = p.n0();
            let result = if founders.fract() == 0.0 && founders >= 1.0 {
                abm_study(p, founders as u64, &cfg.path, &cfg.utility, sim)
            } else {
                Err(Error::InvalidParameter {
                    name: "n0",
                    value: founders,
                    reason: "agent-based mode needs a whole number of founders",
                })
            };
            let (summary, status) = match result {
                Ok(s) => (Some(s), RowStatus::Ok),
                Err(e) => (None, classify(e)),
            };
            AbmRow { point: i, params: *p, summary, status }
        })
        .collect();
    let mut table = Table::new(header(
        &["point"],
        &[
            "status",
            "reason",
            "founders",
            "replications",
            "mean_welfare",
            "standard_error",
            "smoothed_ew",
            "mean_gap",
            "per_capita_abs_gap",
            "per_capita_abs_gap_se",
            "die_off_frequency",
            "truncated_mass",
        ],
    ));
    for r in &rows {
        let [status, reason] = status_cells(&r.status);
        let s = r.summary.as_ref();
        let f = |g: fn(&AbmSummary) -> f64| opt_num(s.map(g));
        table.push(row(
            vec![r.point.to_string()],
            &r.params,
            vec![
                status,
                reason,
                s.map(|s| s.founders.to_string()).unwrap_or_default(),
                s.map(|s| s.replications.to_string()).unwrap_or_default(),
                f(|s| s.mean_welfare),
                f(|s| s.standard_error),
                f(|s| s.smoothed_ew),
                f(|s| s.mean_gap),
                f(|s| s.per_capita_abs_gap),
                f(|s| s.per_capita_abs_gap_se),
                f(|s| s.die_off_frequency),
                f(|s| s.truncated_mass),
            ],
        ));
    }
    Artifact { stem: "abm", table, json: to_json(&rows) }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ProfileRecord {
    pub point: usize,
    pub case: ScenarioCase,
    pub params: HazardParams,
    pub ratios: Vec<f64>,
    /// Ratio minus its long-run limit; social welfare only.
    pub excess: Option<Vec<f64>>,
    pub long_run: Option<f64>,
    pub status: RowStatus,
}

fn parameter_label(p: &HazardParams) -> String {
    format!(
        "m={};M={};b={};theta={};alpha={};n0={}",
        num(p.mortality()),
        num(p.extinction()),
        num(p.birth()),
        num(p.theta()),
        num(p.alpha()),
        num(p.n0())
    )
}

/// Ratios of consecutive series weights over `t = 0..horizon`, as a tidy
/// long table.
pub fn profile(cfg: &RunConfig, grid: &[HazardParams]) -> Outcome {
    let horizon = cfg.profile.horizon;
    let mut records = Vec::new();
    for (i, p) in grid.iter().enumerate() {
        for &case in &cfg.cases {
            let record = if case == ScenarioCase::SocialWelfare {
                match discount_profile(p, horizon) {
                    Ok(prof) => ProfileRecord {
                        point: i,
                        case,
                        params: *p,
                        ratios: prof.ratios,
                        excess: Some(prof.excess),
                        long_run: Some(prof.long_run),
                        status: RowStatus::Ok,
                    },
                    Err(e) => ProfileRecord {
                        point: i,
                        case,
                        params: *p,
                        ratios: Vec::new(),
                        excess: None,
                        long_run: None,
                        status: classify(e),
                    },
                }
            } else {
                ProfileRecord {
                    point: i,
                    case,
                    params: *p,
                    ratios: weight_ratios(case, p, horizon),
                    excess: None,
                    long_run: Some(table_factor(case, p)),
                    status: RowStatus::Ok,
                }
            };
            records.push(record);
        }
    }

    let mut table = Table::new(vec!["point", "case", "parameter", "series", "t", "value"]);
    let mut messages = Vec::new();
    for r in &records {
        if let RowStatus::Undefined(reason) = &r.status {
            messages.push(format!("point {} {}: no profile ({reason})", r.point, r.case));
        }
        let label = parameter_label(&r.params);
        let series = std::iter::once(("ratio", &r.ratios)).chain(r.excess.iter().map(|e| ("excess", e)));
        for (name, values) in series {
            for (t, v) in values.iter().enumerate() {
                table.push(vec![
                    r.point.to_string(),
                    r.case.to_string(),
                    label.clone(),
                    name.into(),
                    t.to_string(),
                    num(*v),
                ]);
            }
        }
    }
    Outcome {
        artifacts: vec![Artifact { stem: "profile", table, json: to_json(&records) }],
        divergent: 0,
        messages,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SensitivityRow {
    pub point: usize,
    pub case: ScenarioCase,
    pub regime: Regime,
    pub params: HazardParams,
    pub response: Option<BeliefResponse>,
    pub derivatives_agree: Option<bool>,
    pub status: RowStatus,
}

/// Tolerance for closed-form against finite-difference derivatives.
pub const DERIVATIVE_TOLERANCE: f64 = 1e-6;

/// Factor derivatives in `M` and `m` under each configured regime.
pub fn sensitivity(cfg: &RunConfig, grid: &[HazardParams]) -> Outcome {
    let sens = &cfg.sensitivity;
    let mut rows = Vec::new();
    for (i, p) in grid.iter().enumerate() {
        for &case in &cfg.cases {
            for &regime in &sens.regimes {
                let result =
                    belief_update_response(case, p, regime, sens.d_extinction, sens.d_mortality);
                let (response, status) = match result {
                    Ok(r) => (Some(r), RowStatus::Ok),
                    Err(e) => (None, classify(e)),
                };
                rows.push(SensitivityRow {
                    point: i,
                    case,
                    regime,
                    params: *p,
                    derivatives_agree: response.map(|r| r.derivatives_agree(DERIVATIVE_TOLERANCE)),
                    response,
                    status,
                });
            }
        }
    }

    let mut table = Table::new(header(
        &["point", "case", "regime"],
        &[
            "status",
            "reason",
            "factor",
            "d_extinction",
            "d_mortality",
            "fd_extinction",
            "fd_mortality",
            "delta_extinction",
            "delta_mortality",
            "extinction_dominates",
            "derivatives_agree",
        ],
    ));
    for r in &rows {
        let [status, reason] = status_cells(&r.status);
        let s = r.response.as_ref();
        let f = |g: fn(&BeliefResponse) -> f64| opt_num(s.map(g));
        let regime = match r.regime {
            Regime::BirthFixed => "birth-fixed",
            Regime::GrowthFixed => "growth-fixed",
        };
        table.push(row(
            vec![r.point.to_string(), r.case.to_string(), regime.into()],
            &r.params,
            vec![
                status,
                reason,
                f(|s| s.factor),
                f(|s| s.d_extinction),
                f(|s| s.d_mortality),
                f(|s| s.fd_extinction),
                f(|s| s.fd_mortality),
                f(|s| s.delta_extinction),
                f(|s| s.delta_mortality),
                s.map(|s| s.extinction_dominates.to_string()).unwrap_or_default(),
                r.derivatives_agree.map(|a| a.to_string()).unwrap_or_default(),
            ],
        ));
    }
    Outcome::single(Artifact { stem: "sensitivity", table, json: to_json(&rows) }, 0)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Table1Row {
    pub point: usize,
    pub case: ScenarioCase,
    pub params: HazardParams,
    /// Summary-table expression.
    pub factor: f64,
    /// Ratio of consecutive series weights; absent for social welfare.
    pub from_weights: Option<f64>,
    /// Stationary-population column.
    pub factor_n0: f64,
    /// Weight ratio at the same point with `b = m/(1-m)`.
    pub from_weights_n0: Option<f64>,
}

/// Both columns of the summary table, each next to the factor recovered
/// from the series weights.
pub fn table1(grid: &[HazardParams]) -> Result<Outcome, Error> {
    let mut rows = Vec::new();
    for (i, p) in grid.iter().enumerate() {
        let stationary = HazardParams::zero_growth(p.mortality(), p.extinction())?
            .with_theta(p.theta())?
            .with_alpha(p.alpha())?
            .with_n0(p.n0())?;
        for case in ScenarioCase::TABLE {
            let weights = |q: &HazardParams| {
                case.has_constant_factor().then(|| factor_from_weights(case, q)).transpose()
            };
            rows.push(Table1Row {
                point: i,
                case,
                params: *p,
                factor: table_factor(case, p),
                from_weights: weights(p)?,
                factor_n0: table_factor_zero_growth(case, p),
                from_weights_n0: weights(&stationary)?,
            });
        }
    }
    let mut table = Table::new(header(
        &["point", "case"],
        &["factor", "from_weights", "factor_n0", "from_weights_n0", "rate_simple", "rate_log"],
    ));
    for r in &rows {
        table.push(row(
            vec![r.point.to_string(), r.case.to_string()],
            &r.params,
            vec![
                num(r.factor),
                opt_num(r.from_weights),
                num(r.factor_n0),
                opt_num(r.from_weights_n0),
                num(1.0 - r.factor),
                num(-r.factor.ln()),
            ],
        ));
    }
    Ok(Outcome::single(Artifact { stem: "table1", table, json: to_json(&rows) }, 0))
}
