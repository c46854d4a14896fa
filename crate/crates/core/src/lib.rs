//! Coincident graph learning.
//!
//! An agent walks an environment graph once, building an internal weighted
//! graph (the coincident matrix) from the inputs it sees together. Reward and
//! penalty nodes are wired into that matrix up front. To act, the agent feeds
//! unit inputs at the nodes it currently perceives through a few rounds of the
//! cell update and moves to whichever neighbor (or itself) ends up with the
//! most signal. Repeated coincidences weaken edges instead of strengthening
//! them, which pushes the agent away from where it has just been.
//!
//! ```
//! use cgl_core::{agent, graph};
//!
//! let env = graph::generate_lattice(8, 8).unwrap();
//! let cfg = agent::AgentConfig::default();
//! let wired = agent::wired_matrix(&env, &cfg, &[(64, 3.0)], &[]).unwrap();
//! let trained = agent::train(&env, &wired, &cfg).unwrap();
//! let run = agent::navigate(&env, &trained, 1, 64, &cfg).unwrap();
//! assert!(run.succeeded());
//! ```

pub mod agent;
pub mod dynamics;
pub mod envspec;
pub mod error;
pub mod graph;
pub mod graph_io;
pub mod harness;
pub mod heatmap;
pub mod matrix;
pub mod state;

pub use agent::{AgentConfig, InputMode, PerceptionMode, RunResult, TrainingWalk};
pub use dynamics::{cell_update, memory_vector, normalize_display, recurse};
pub use envspec::EnvSpec;
pub use error::{CglError, Result};
pub use graph::{EnvironmentGraph, GraphKind, NodeId};
pub use matrix::{CoincidentMatrix, FloorMode, Normalization, Plasticity};
pub use state::StateVector;
