//! Truncated-series evaluation of the expected-utility functionals, with
//! rigorous tail bounds and finiteness checks.

pub mod case;
pub mod functionals;
pub mod series;

pub use case::{finiteness_check, series_weight, Finiteness, ScenarioCase};
pub use functionals::{
    eg_lineage, eu_individual, eu_known_extinction, evaluate, ev_dynasty, ev_dynasty_theta,
    ew_social, ew_social_zero_growth, welfare_window, welfare_window_direct,
};
pub use series::{SeriesResult, DEFAULT_TOLERANCE, MAX_TERMS};
