//! Lane-graph spatial occupancy prediction.
//!
//! The crate proposes branch-free lane paths for an actor from a lane graph,
//! cuts each path into fixed-length full-width cells, labels and predicts the
//! probability that the actor touches each cell within a horizon, and scores
//! predictions against trajectory baselines on a common 2D occupancy grid.

pub mod baselines;
pub mod cli;
pub mod error;
pub mod eval;
pub mod geometry;
pub mod labeling;
pub mod lane_graph;
pub mod lon;
pub mod pipeline;
pub mod simgen;

pub use error::{Error, Result};
