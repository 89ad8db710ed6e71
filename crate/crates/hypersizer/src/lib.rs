//! Parametric sizing toolkit for petaflops-scale machine installations.
//!
//! The model chain: a machine description (node count, clock, word width)
//! plus an interconnect technology yields a total wire count; thermal and
//! geometric constraints turn that into four candidate installation
//! diameters (static, dynamic, and driver thermal cores, plus the packing
//! core); the binding diameter sets signal round-trip latency and with it
//! the number of concurrent threads each node needs to hide memory
//! latency. A cycle-level simulator checks that balance empirically, and
//! an explorer layer provides parameter sweeps, technology comparisons,
//! and break-even solving on top.
//!
//! All quantities are SI: meters, seconds, Hz, bits, watts, ohm-meters.

pub mod bundle;
pub mod config;
pub mod error;
pub mod explorer;
pub mod machine;
pub mod parallelism;
pub mod report;
pub mod simulator;
pub mod sizing;

pub use crate::error::{Error, Result};

#[cfg(test)]
pub(crate) mod fixtures;
