//! Discount factors, social-welfare discount profiles, belief-update
//! sensitivities and scenario sweeps.

pub mod factors;
pub mod profile;
pub mod sensitivity;
pub mod sweep;

pub use factors::{
    discount_factor, factor_from_weights, table_factor, table_factor_zero_growth, weight_ratios,
    DiscountReport,
};
pub use profile::{discount_profile, DiscountProfile};
pub use sensitivity::{belief_update_response, perturb, BeliefResponse, Regime, FD_STEP};
pub use sweep::{evaluate_row, scenario_sweep, RowStatus, SweepRow};
