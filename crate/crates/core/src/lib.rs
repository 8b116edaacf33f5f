//! F-1 roofline bottleneck analysis for autonomous UAVs.
//!
//! The crate relates the end-to-end decision rate of a UAV's sense/compute/control
//! pipeline to the highest velocity at which it can still stop before an obstacle,
//! and reports which subsystem limits that velocity.

pub mod analysis;
pub mod catalog;
pub mod cli;
pub mod error;
pub mod model;
pub mod physics;
pub mod report;
pub mod service;
pub mod svg;
pub mod units;

pub use analysis::{analyze, F1Analysis, UavConfiguration};
pub use error::{Error, Result};

/// Version stamped into reports and service responses.
pub const MODEL_VERSION: &str = env!("CARGO_PKG_VERSION");
