//! Exact analysis of continuous piecewise-linear interval maps: periodic
//! structure, Markov graphs, topological entropy and chaos statistics.

pub mod chaos;
pub mod entropy;
pub mod error;
pub mod families;
pub mod markov;
pub mod periodic;
pub mod plot;
pub mod pwl;
pub mod rational;
pub mod report;

pub use error::{Error, Result};
pub use pwl::{Budget, MapSpec, PwlMap};
pub use rational::{IntervalQ, Rat};
