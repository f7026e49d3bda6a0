use serde::{Deserialize, Serialize};

use crate::model::distribution::pow;
use crate::model::params::HazardParams;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PopulationKind {
    /// `N0 (1+b)^t (1-m)^t`.
    Dynasty,
    /// Genetic lineage `(1+b)^(alpha t) (1-m)^t`, normalized to 1 at `t = 0`.
    Lineage,
    /// `N0 (1+n)^t`.
    Population,
}

/// Smoothed size of a dynasty, lineage or whole population that is wiped out
/// after `extinction_date`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PopulationProcess {
    pub kind: PopulationKind,
    pub params: HazardParams,
    pub extinction_date: u64,
}

impl PopulationProcess {
    pub fn at(&self, t: u64) -> f64 {
        if t > self.extinction_date {
            return 0.0;
        }
        let p = &self.params;
        match self.kind {
            PopulationKind::Dynasty => {
                p.n0() * pow(1.0 + p.birth(), t) * pow(1.0 - p.mortality(), t)
            }
            PopulationKind::Lineage => {
                (1.0 + p.birth()).powf(p.alpha() * t as f64) * pow(1.0 - p.mortality(), t)
            }
            PopulationKind::Population => p.n0() * pow(p.gross_growth(), t),
        }
    }
}

/// Convenience form of [`PopulationProcess::at`].
pub fn population_at(process: &PopulationProcess, t: u64) -> f64 {
    process.at(t)
}
