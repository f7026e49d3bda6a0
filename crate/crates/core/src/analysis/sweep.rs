use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::analysis::factors::{discount_factor, DiscountReport};
use crate::analytic::{evaluate, finiteness_check, Finiteness, ScenarioCase, SeriesResult};
use crate::error::Error;
use crate::model::{ConsumptionPath, HazardParams, Utility};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", content = "reason", rename_all = "kebab-case")]
pub enum RowStatus {
    Ok,
    Divergent,
    /// The functional is not defined at this point (e.g. no extinction risk).
    Undefined(String),
}

/// One `(grid point, case)` evaluation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepRow {
    pub point: usize,
    pub params: HazardParams,
    pub case: ScenarioCase,
    pub report: DiscountReport,
    pub finiteness: Finiteness,
    pub status: RowStatus,
    /// Present only when `status` is `Ok`.
    pub series: Option<SeriesResult>,
}

impl SweepRow {
    pub fn is_divergent(&self) -> bool {
        self.status == RowStatus::Divergent
    }
}

pub fn evaluate_row(
    point: usize,
    params: &HazardParams,
    case: ScenarioCase,
    path: &ConsumptionPath,
    u: &Utility,
    tolerance: f64,
) -> SweepRow {
    let finiteness = finiteness_check(case, params);
    let (status, series) = match evaluate(case, params, path, u, tolerance) {
        Ok(s) => (RowStatus::Ok, Some(s)),
        Err(Error::Divergent { .. } | Error::UnsummableTail { .. } | Error::Degenerate) => {
            (RowStatus::Divergent, None)
        }
        Err(e) => (RowStatus::Undefined(e.to_string()), None),
    };
    SweepRow {
        point,
        params: *params,
        case,
        report: discount_factor(case, params),
        finiteness,
        status,
        series,
    }
}

/// Evaluates every case at every grid point; rows are ordered by point, then
/// by case. Divergent points are kept and flagged.
pub fn scenario_sweep(
    grid: &[HazardParams],
    cases: &[ScenarioCase],
    path: &ConsumptionPath,
    u: &Utility,
    tolerance: f64,
) -> Vec<SweepRow> {
    grid.par_iter()
        .enumerate()
        .flat_map_iter(|(i, p)| {
            cases.iter().map(move |&case| evaluate_row(i, p, case, path, u, tolerance))
        })
        .collect()
}
