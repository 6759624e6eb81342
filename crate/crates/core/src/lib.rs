//! Bayesian nonparametric species richness prediction under the
//! two-parameter Poisson-Dirichlet (Pitman-Yor) partition model.
//!
//! Given a pilot sample of `n` observations carrying `k` distinct species,
//! the crate computes the law of the number of new species `K_m` in a
//! further sample of size `m`: exact pmfs, closed-form means and moments,
//! credible intervals, the large-`m` limit law, a Chinese restaurant
//! simulator and an exact-rational brute-force oracle.

pub mod asymptotics;
pub mod cli;
pub mod conditional;
mod dd;
pub mod error;
pub mod factorials;
pub mod fit;
pub mod gof;
pub mod logspace;
pub mod oracle;
pub mod params;
pub mod pmf;
pub mod prior;
pub mod quad;
pub mod simulate;
pub mod stable;
pub mod stirling;

pub use asymptotics::LimitLaw;
pub use conditional::PredictionQuery;
pub use error::{Error, Result};
pub use logspace::{LogValue, SignedLog};
pub use params::{PDParams, PartitionData};
pub use pmf::Pmf;
pub use stirling::LogTable;
