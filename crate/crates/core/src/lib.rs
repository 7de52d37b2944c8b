//! Core domain library for the plan-safety monitor workbench.
//!
//! This crate bundles the non-learned half of the pipeline:
//!
//! - [`scene`]: world snapshots (ego, agents, road graph) plus the scene
//!   editing primitives used during dataset generation,
//! - [`scenegen`]: a deterministic synthetic scene generator,
//! - [`predict`]: lane-keep / constant-velocity forecasting of non-ego agents,
//! - [`rules`]: quantitative robustness of the seven ranked traffic rules and
//!   the rank-weighted hierarchy reward used as the labeling oracle,
//! - [`planner`]: unicycle dynamics, the 256-leaf motion-primitive trajectory
//!   tree, and the reward-maximizing planner,
//! - [`reach`]: grid-based Hamilton-Jacobi level-set solvers for forward and
//!   backward reachable tubes (the comparison baselines),
//! - [`datagen`]: missed-agent failure injection and labeled dataset
//!   collection.
//!
//! Everything is a pure function over immutable values; all randomness flows
//! through explicitly seeded generators so that every artifact is
//! reproducible from `(seed, config)` alone.

pub mod datagen;
pub mod error;
pub mod geom;
pub mod planner;
pub mod predict;
pub mod reach;
pub mod rules;
pub mod scene;
pub mod scenegen;

pub use error::CoreError;
