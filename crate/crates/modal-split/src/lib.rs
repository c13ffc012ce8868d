//! A numerical laboratory for bimodal modal split: generalized trip costs
//! with a quartic BPR congestion law, a Zipf-Pareto value-of-time demand
//! curve, day-by-day best-response dynamics with a contraction-based
//! convergence guarantee, finite-population (agent-based) replication, and
//! the coin-allocation Yule process whose stationary wealth law justifies
//! the power-law demand curve.
//!
//! The `cli` module and the `modal-split` binary expose the whole toolkit
//! as reproducible batch experiments emitting CSV, JSON summaries, and a
//! cobweb SVG.

pub mod cli;
pub mod equilibrium;
pub mod error;
pub mod model;
pub mod population;
pub mod yule;

pub use error::{Error, Result};
pub use model::{ConditionCheck, ConditionReport, ModelParams};
