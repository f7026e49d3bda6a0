//! Run configuration read from a TOML file.

use std::path::Path;

use extinction_discount::analysis::Regime;
use extinction_discount::analytic::{ScenarioCase, DEFAULT_TOLERANCE};
use extinction_discount::model::{ConsumptionPath, HazardParams, Utility};
use extinction_discount::simulation::SimulationConfig;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

/// Upper limit on the number of grid points a config may expand to.
pub const MAX_GRID_POINTS: usize = 1_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    #[default]
    Csv,
    Json,
}

/// A list of values, a single value, or an evenly spaced range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum Values {
    One(f64),
    List(Vec<f64>),
    Linspace { linspace: (f64, f64, usize) },
}

impl Values {
    pub fn expand(&self) -> Vec<f64> {
        match self {
            Values::One(x) => vec![*x],
            Values::List(xs) => xs.clone(),
            Values::Linspace { linspace: (a, b, n) } => match *n {
                0 => Vec::new(),
                1 => vec![*a],
                n => (0..n).map(|i| a + (b - a) * i as f64 / (n - 1) as f64).collect(),
            },
        }
    }

    fn len(&self) -> usize {
        match self {
            Values::One(_) => 1,
            Values::List(xs) => xs.len(),
            Values::Linspace { linspace: (_, _, n) } => *n,
        }
    }
}

fn single(x: f64) -> Values {
    Values::One(x)
}

/// Cartesian grid over the hazard parameters.
///
/// With `zero_growth = true`, `b` is not read and is set to `m/(1-m)` at
/// every point.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub m: Values,
    #[serde(rename = "M")]
    pub big_m: Values,
    #[serde(default = "zero")]
    pub b: Values,
    #[serde(default = "one")]
    pub theta: Values,
    #[serde(default = "half")]
    pub alpha: Values,
    #[serde(default = "one")]
    pub n0: Values,
    #[serde(default)]
    pub zero_growth: bool,
}

fn zero() -> Values {
    single(0.0)
}
fn one() -> Values {
    single(1.0)
}
fn half() -> Values {
    single(0.5)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProfileSpec {
    pub horizon: u64,
}

impl Default for ProfileSpec {
    fn default() -> Self {
        ProfileSpec { horizon: 200 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SensitivitySpec {
    #[serde(default = "both_regimes")]
    pub regimes: Vec<Regime>,
    #[serde(default = "small_update")]
    pub d_extinction: f64,
    #[serde(default = "small_update")]
    pub d_mortality: f64,
}

fn both_regimes() -> Vec<Regime> {
    vec![Regime::BirthFixed, Regime::GrowthFixed]
}

fn small_update() -> f64 {
    1e-3
}

impl Default for SensitivitySpec {
    fn default() -> Self {
        SensitivitySpec {
            regimes: both_regimes(),
            d_extinction: small_update(),
            d_mortality: small_update(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(default = "table_cases")]
    pub cases: Vec<ScenarioCase>,
    /// Absent grid means no points.
    #[serde(default)]
    pub grid: Option<GridSpec>,
    #[serde(default = "unit_path")]
    pub path: ConsumptionPath,
    #[serde(default)]
    pub utility: Utility,
    #[serde(default = "default_tolerance")]
    pub tolerance: f64,
    #[serde(default)]
    pub simulation: Option<SimulationConfig>,
    #[serde(default)]
    pub profile: ProfileSpec,
    #[serde(default)]
    pub sensitivity: SensitivitySpec,
    #[serde(default)]
    pub format: Format,
}

fn table_cases() -> Vec<ScenarioCase> {
    ScenarioCase::TABLE.to_vec()
}

fn unit_path() -> ConsumptionPath {
    ConsumptionPath::constant(1.0).expect("valid constant path")
}

fn default_tolerance() -> f64 {
    DEFAULT_TOLERANCE
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            cases: table_cases(),
            grid: None,
            path: unit_path(),
            utility: Utility::default(),
            tolerance: default_tolerance(),
            simulation: None,
            profile: ProfileSpec::default(),
            sensitivity: SensitivitySpec::default(),
            format: Format::default(),
        }
    }
}

impl RunConfig {
    pub fn from_toml(text: &str, origin: &str) -> Result<Self, CliError> {
        let cfg: RunConfig = toml::from_str(text).map_err(|e| CliError::Config {
            location: origin.to_string(),
            message: e.to_string(),
        })?;
        cfg.validate(origin)?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = std::fs::read_to_string(path).map_err(|e| CliError::Io {
            path: path.display().to_string(),
            message: e.to_string(),
        })?;
        Self::from_toml(&text, &path.display().to_string())
    }

    fn validate(&self, origin: &str) -> Result<(), CliError> {
        let located = |key: &str, message: String| CliError::Config {
            location: format!("{origin}: key `{key}`"),
            message,
        };
        if !(self.tolerance > 0.0 && self.tolerance.is_finite()) {
            return Err(located("tolerance", format!("must be positive, got {}", self.tolerance)));
        }
        self.utility.validate().map_err(|e| located("utility", e.to_string()))?;
        if let Some(sim) = &self.simulation {
            if sim.replications == 0 {
                return Err(located("simulation.replications", "must be >= 1".into()));
            }
        }
        if let Some(grid) = &self.grid {
            grid.points(origin)?;
        }
        Ok(())
    }

    /// Expanded grid, or no points when the config has no grid.
    pub fn points(&self, origin: &str) -> Result<Vec<HazardParams>, CliError> {
        self.grid.as_ref().map_or(Ok(Vec::new()), |g| g.points(origin))
    }
}

impl GridSpec {
    /// Cartesian product with `m` varying slowest and `n0` fastest.
    pub fn points(&self, origin: &str) -> Result<Vec<HazardParams>, CliError> {
        let located = |key: &str, message: String| CliError::Config {
            location: format!("{origin}: key `grid.{key}`"),
            message,
        };
        let mut axes = vec![("m", &self.m), ("M", &self.big_m)];
        if !self.zero_growth {
            axes.push(("b", &self.b));
        }
        axes.extend([("theta", &self.theta), ("alpha", &self.alpha), ("n0", &self.n0)]);
        let mut total = 1usize;
        for (key, values) in &axes {
            if let Values::Linspace { linspace: (a, b, _) } = values {
                if !(a.is_finite() && b.is_finite()) {
                    return Err(located(key, "linspace bounds must be finite".into()));
                }
            }
            total = total.saturating_mul(values.len());
        }
        if total > MAX_GRID_POINTS {
            return Err(located(
                "*",
                format!("grid expands to {total} points, limit is {MAX_GRID_POINTS}"),
            ));
        }

        let expanded: Vec<(&str, Vec<f64>)> =
            axes.iter().map(|(k, v)| (*k, v.expand())).collect();
        let lookup = |key: &str| &expanded.iter().find(|(k, _)| *k == key).unwrap().1;
        let b_values = if self.zero_growth { vec![f64::NAN] } else { lookup("b").clone() };

        let mut out = Vec::with_capacity(total);
        for &m in lookup("m") {
            for &big_m in lookup("M") {
                for &b in &b_values {
                    let base = if self.zero_growth {
                        HazardParams::zero_growth(m, big_m)
                    } else {
                        HazardParams::new(m, big_m, b)
                    };
                    let base = base.map_err(|e| {
                        let key = blame(&e, &["m", "M", "b"]);
                        located(key, format!("at m = {m}, M = {big_m}: {e}"))
                    })?;
                    for &theta in lookup("theta") {
                        let with_theta = base
                            .with_theta(theta)
                            .map_err(|e| located("theta", e.to_string()))?;
                        for &alpha in lookup("alpha") {
                            let with_alpha = with_theta
                                .with_alpha(alpha)
                                .map_err(|e| located("alpha", e.to_string()))?;
                            for &n0 in lookup("n0") {
                                out.push(
                                    with_alpha
                                        .with_n0(n0)
                                        .map_err(|e| located("n0", e.to_string()))?,
                                );
                            }
                        }
                    }
                }
            }
        }
        Ok(out)
    }
}

fn blame<'a>(e: &extinction_discount::Error, keys: &[&'a str]) -> &'a str {
    if let extinction_discount::Error::InvalidParameter { name, .. } = e {
        if let Some(k) = keys.iter().find(|k| **k == *name) {
            return k;
        }
    }
    keys[0]
}
