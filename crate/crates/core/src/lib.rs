//! Extremal-weight combinatorial structures in complete graphs with i.i.d.
//! symmetric edge weights.
//!
//! The crate is organised bottom-up:
//!
//! - [`dist`]: the closed catalog of symmetric edge-weight laws (exact tails,
//!   log-moment generating functions, sampling).
//! - [`ratefn`]: numeric Legendre transform, its generalised inverse, Chernoff
//!   bounds and the threshold sequence `x_n`.
//! - [`structures`]: structure families, their counts, balanced patterns and
//!   the leading-order predictions.
//! - [`solvers`]: exact maximum-weight solvers plus brute-force oracles.
//! - [`pruning`]: threshold-graph lower-bound certificates.
//! - [`experiments`]: the seeded Monte Carlo harness and its reports.

pub mod dist;
mod error;
mod ext;
pub mod experiments;
pub mod pruning;
pub mod ratefn;
pub mod solvers;
pub mod structures;

pub use error::{Error, Result};
pub use ext::ExtReal;
