//! Parameters, consumption paths, utility families, and the lifetime,
//! extinction and population laws built from them.

pub mod distribution;
pub mod params;
pub mod path;
pub mod population;
pub mod utility;

pub use distribution::{
    extinction_pmf, extinction_survival, lifetime_cdf, lifetime_pmf, lifetime_pmf_known_date,
    sample_lifetime, ExtinctionPmf, GeometricDate, LifetimePmf, LifetimeSampler,
};
pub use params::HazardParams;
pub use path::{ConsumptionPath, TailRule};
pub use population::{population_at, PopulationKind, PopulationProcess};
pub use utility::Utility;
