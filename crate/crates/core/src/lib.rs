//! Furnace setpoint optimization with regression-tree surrogates,
//! evolutionary multi-objective search and two-player Nash bargaining.
//!
//! The crate is organized bottom-up:
//!
//! * [`dataset`]: operating records, CSV ingestion, synthetic data, splits.
//! * [`surrogate`]: CART regression trees and their quality metrics.
//! * [`evolve`]: SBX, polynomial mutation, tournaments and a single-objective GA.
//! * [`moo`]: dominance, non-dominated sorting, NSGA-II and R-NSGA-II.
//! * [`bargain`]: best responses, payoff matrix, disagreement point and the
//!   Nash-product solver.
//! * [`pipeline`]: configuration, the grid oracle, orchestration and reports.

pub mod dataset;
pub mod error;
pub mod bargain;
pub mod evolve;
pub mod moo;
pub mod pipeline;
pub mod rng;
pub mod surrogate;

pub use dataset::{Column, Dataset, FurnaceRecord, SyntheticSpec};
pub use error::{Error, Result, Stage};
pub use evolve::{BoundsBox, GaParams};
pub use pipeline::{ComparisonReport, PipelineConfig};
pub use surrogate::{CartParams, ModelMetrics, RegressionTree};
