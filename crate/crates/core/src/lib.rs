//! Multiobjective NK-landscapes with tunable objective correlation, and
//! set-based fitness-landscape analysis on top of them.
//!
//! * [`landscape`] builds and evaluates instances over bit strings.
//! * [`pareto`] holds dominance, non-dominated filtering and the hypervolume.
//! * [`setspace`] defines solution-sets and their neighborhoods.
//! * [`walks`] runs random and adaptive walks and estimates autocorrelation.
//! * [`harness`] sweeps parameter grids and writes CSV.

pub mod copula;
pub mod error;
pub mod exec;
pub mod harness;
pub mod landscape;
pub mod pareto;
pub mod rng;
pub mod setspace;
pub mod stats;
pub mod walks;

pub use error::{Error, Result};
pub use exec::Execution;
pub use landscape::{InstanceParams, ObjectiveVector, RhoMnkInstance, Solution};
pub use setspace::SolutionSet;
