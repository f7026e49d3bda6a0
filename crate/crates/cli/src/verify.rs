//! Analytic-versus-Monte-Carlo oracle suite over the built-in grid.

use extinction_discount::analytic::{evaluate, ScenarioCase};
use extinction_discount::model::HazardParams;
use extinction_discount::simulation::{SimEstimate, SimulationConfig};
use serde::{Deserialize, Serialize};

use crate::commands::{mc_estimate, row_seed, z_score};
use crate::error::CliError;
use crate::output::{num, to_json, Artifact, Table};
use crate::presets::{verify_grid, verify_path};

/// Allowed number of 3-SE misses over the whole grid.
pub const FAILURE_BUDGET: usize = 1;

pub const DEFAULT_REPLICATIONS: u64 = 1_000_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct VerifyRow {
    pub point: usize,
    pub case: ScenarioCase,
    pub params: HazardParams,
    pub seed: u64,
    pub analytic: f64,
    pub estimate: SimEstimate,
    pub z: f64,
    pub pass: bool,
}

pub struct VerifyReport {
    pub rows: Vec<VerifyRow>,
    pub failures: usize,
    /// One line per grid point.
    pub lines: Vec<String>,
}

fn compare(
    point: usize,
    k: usize,
    case: ScenarioCase,
    p: &HazardParams,
    sim: &SimulationConfig,
) -> Result<VerifyRow, CliError> {
    let (path, u) = verify_path();
    let mut local = sim.clone();
    local.seed = row_seed(sim.seed, point, k);
    let analytic = evaluate(case, p, &path, &u, 1e-12)?.value;
    let estimate = mc_estimate(case, p, &path, &u, &local)?;
    Ok(VerifyRow {
        point,
        case,
        params: *p,
        seed: local.seed,
        analytic,
        estimate,
        z: z_score(&estimate, analytic),
        pass: estimate.agrees_with(analytic, 3.0),
    })
}

pub fn run(seed: u64, replications: u64) -> Result<VerifyReport, CliError> {
    let sim = SimulationConfig::new(replications, seed);
    let mut rows = Vec::new();
    let mut lines = Vec::new();
    for (i, p) in verify_grid().iter().enumerate() {
        let point_rows: Vec<VerifyRow> = ScenarioCase::TABLE
            .iter()
            .enumerate()
            .map(|(k, &case)| compare(i, k, case, p, &sim))
            .collect::<Result<_, _>>()?;
        let misses: Vec<String> = point_rows
            .iter()
            .filter(|r| !r.pass)
            .map(|r| format!("{} z={:.2}", r.case, r.z))
            .collect();
        lines.push(if misses.is_empty() {
            format!("point {i:2}: PASS ({} functionals)", point_rows.len())
        } else {
            format!("point {i:2}: FAIL [{}]", misses.join(", "))
        });
        rows.extend(point_rows);
    }
    let failures = rows.iter().filter(|r| !r.pass).count();
    Ok(VerifyReport { rows, failures, lines })
}

/// Recomputes the first grid point on a pool with a different thread count
/// and requires bit-identical estimates.
pub fn self_check(report: &VerifyReport, seed: u64, replications: u64) -> Result<(), CliError> {
    let sim = SimulationConfig::new(replications, seed);
    let grid = verify_grid();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(3)
        .build()
        .map_err(|e| CliError::NotReproducible(e.to_string()))?;
    for (k, &case) in ScenarioCase::TABLE.iter().enumerate() {
        let again = pool.install(|| compare(0, k, case, &grid[0], &sim))?;
        let first = &report.rows[k];
        let same = |a: f64, b: f64| a.to_bits() == b.to_bits();
        if !(same(again.estimate.mean, first.estimate.mean)
            && same(again.estimate.standard_error, first.estimate.standard_error))
        {
            return Err(CliError::NotReproducible(format!(
                "{case} at point 0: {} then {}",
                first.estimate.mean, again.estimate.mean
            )));
        }
    }
    Ok(())
}

pub fn artifact(report: &VerifyReport) -> Artifact {
    let mut table = Table::new(vec![
        "point",
        "case",
        "seed",
        "analytic",
        "mean",
        "standard_error",
        "replications",
        "truncated_mass",
        "z",
        "pass",
    ]);
    for r in &report.rows {
        table.push(vec![
            r.point.to_string(),
            r.case.to_string(),
            r.seed.to_string(),
            num(r.analytic),
            num(r.estimate.mean),
            num(r.estimate.standard_error),
            r.estimate.replications.to_string(),
            num(r.estimate.truncated_mass),
            num(r.z),
            r.pass.to_string(),
        ]);
    }
    Artifact { stem: "verify", table, json: to_json(&report.rows) }
}
