//! Bat Algorithm (BA) and Modified Frequency Bat Algorithm (MFBA) optimizers,
//! a benchmark-function harness, and a reactive path planner for a point robot
//! moving among constant-velocity circular obstacles.
//!
//! The planner alternates between two modes every cycle: when nothing is inside
//! the sensing range it asks the optimizer for the next waypoint, otherwise it
//! escapes through the free gap of a twelve-sector occupancy ring that lies
//! closest to the goal direction.

pub mod benchmarks;
pub mod environment;
mod error;
pub mod optimizer;
pub mod perception;
pub mod planner;

pub use error::{Error, Result};
