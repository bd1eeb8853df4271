//! Heavy-tailed last-passage percolation.
//!
//! The crate simulates directed last-passage percolation with heavy-tailed
//! site weights in four forms:
//!
//! * [`lattice`]: the discrete model on `{1..n}^d`, solved by dynamic programming;
//! * [`continuum`] / [`chains`]: the limiting model, where the `k` largest
//!   weights `M_i = (W_1 + ... + W_i)^(-1/alpha)` sit at uniform locations and
//!   the passage time is a maximum-weight chain;
//! * [`greedy`]: the `alpha = 0` limit, the greedy path and its multifractal
//!   measure;
//! * [`stable`]: directed percolation through independent alpha-stable processes.
//!
//! Replicate-level Monte Carlo runs through [`exec`], which is data-parallel
//! when the `parallel` feature is on (the default) and sequential otherwise.
//! Results never depend on the number of worker threads.

pub mod chains;
pub mod continuum;
pub mod distributions;
mod error;
pub mod exec;
pub mod experiments;
pub mod greedy;
pub mod lattice;
pub mod stable;
pub mod stats;

pub use error::{Error, Result};
