use thiserror::Error;

/// Errors raised by the model, the analytic engine, the simulators and the
/// analysis layer.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter `{name}` = {value}: {reason}")]
    InvalidParameter {
        name: &'static str,
        value: f64,
        reason: &'static str,
    },

    #[error("invalid consumption path: {0}")]
    InvalidPath(String),

    #[error("degenerate hazards (m = M = 0): lifetime is infinite and expected utility diverges")]
    Degenerate,

    #[error("{case} diverges: discount factor {factor} is not below 1")]
    Divergent { case: String, factor: f64 },

    #[error("utility tail is not summable: weight ratio {weight_ratio} times utility growth {utility_growth} is not below 1")]
    UnsummableTail { weight_ratio: f64, utility_growth: f64 },

    #[error("functional undefined without extinction risk (M = 0)")]
    NoExtinction,

    #[error("functional requires a positive birth rate (b > 0)")]
    ZeroBirthRate,

    #[error("date {t} lies after the extinction date {extinction_date}")]
    AfterExtinction { t: u64, extinction_date: u64 },

    #[error("{0} has a non-constant discount factor; use the discount profile")]
    NonConstantFactor(String),

    #[error("finite-difference stencil for `{name}` leaves the parameter domain at {value} (step {step})")]
    StencilOutOfDomain {
        name: &'static str,
        value: f64,
        step: f64,
    },

    #[error("simulation needs an explicit horizon cap when M = 0")]
    MissingHorizonCap,

    #[error("{0}")]
    UnsupportedMode(&'static str),
}

pub type Result<T> = std::result::Result<T, Error>;
