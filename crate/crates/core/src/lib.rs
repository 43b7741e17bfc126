//! Repetition-free longest common subsequences of random k-ary sequences.
//!
//! The crate is organised bottom-up:
//!
//! - [`model`]: instances, noncrossing matchings and their validators.
//! - [`rng`]: the seeded, stream-splittable generator every stochastic routine draws from.
//! - [`generators`]: the uniform random word model and the planted model.
//! - [`solvers`]: LCS, LIS, the exact bitset solver, the brute-force oracle and the
//!   segment-merge lower-bound construction.
//! - [`urns`]: classical and grouped urn occupancy, sampled and exact.
//! - [`bounds`]: closed-form tail bounds and regime targets.
//! - [`experiments`]: the Monte Carlo harness (regime sweeps, saturation, uniformity,
//!   tail-bound battery).

pub mod bounds;
pub mod error;
pub mod experiments;
pub mod generators;
pub mod model;
pub mod rng;
pub mod solvers;
pub mod stats;
pub mod urns;

pub use error::{Error, Result};
pub use model::{Instance, NoncrossingMatching, PlantedCertificate, SolveMethod, SolveResult, Symbol};
pub use rng::RngStream;
