//! Expected-utility discounting under individual mortality risk and
//! human-extinction risk.
//!
//! * [`model`]: hazard parameters, consumption paths, utility families and the
//!   lifetime, extinction and population laws.
//! * [`analytic`]: truncated-series evaluation of every expected-utility
//!   functional with rigorous tail bounds.
//! * [`simulation`]: seeded Monte Carlo estimators of the same functionals and
//!   an agent-based population model.
//! * [`analysis`]: discount factors, discount profiles, belief-update
//!   sensitivities and scenario sweeps.

pub mod analysis;
pub mod analytic;
pub mod error;
pub mod model;
pub mod simulation;

pub use error::{Error, Result};
