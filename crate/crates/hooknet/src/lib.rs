//! Exact degree laws for randomly grown hooking networks.
//!
//! A hooking network grows from a fixed connected seed graph: at every step
//! a fresh copy of the seed is fused, at its designated hook vertex, onto a
//! latch vertex chosen uniformly over the remaining insertion positions.
//! Each vertex may serve as a latch at most `m` times. This crate derives,
//! in exact rational arithmetic, everything the growth law determines:
//!
//! - the balanced urn model tracking insertion positions by degree class
//!   and hooking history ([`urn`]),
//! - its integer spectrum, verified independently by fraction-free
//!   determinants, and the principal eigenvector ([`spectrum`]),
//! - almost-sure degree limits and the limiting Gaussian covariance of the
//!   fluctuations around them ([`laws`]),
//! - a coupled urn/graph simulator and a replicated Monte-Carlo harness
//!   that tests the exact laws at finite size ([`sim`], [`stats`]).
//!
//! The runnable examples under `examples/` walk through the whole pipeline;
//! the `hooknet` binary ([`cli`]) exposes it as `analyze`, `simulate`,
//! `verify`, and `examples` subcommands. Four bundled instances
//! ([`bundled`]) pin the library against independently tabulated values.
//!
//! Everything downstream of a seed document is deterministic: analysis is
//! exact, and simulation depends only on the RNG seed, never on thread
//! count or scheduling.

pub mod bundled;
pub mod cli;
pub mod error;
pub mod laws;
pub mod matrix;
pub mod modsolve;
pub mod profile;
pub mod ratio;
pub mod report;
pub mod seed;
pub mod sim;
pub mod spectrum;
pub mod stats;
pub mod urn;

pub use error::{Error, Result};
pub use laws::DegreeLawReport;
pub use profile::DegreeProfile;
pub use report::{Analysis, Format};
pub use seed::SeedSpec;
pub use sim::Mode;
pub use spectrum::Spectrum;
pub use urn::UrnModel;
