//! Experiment drivers: the reference oracle, scenario replications, and
//! randomized trial batteries with their statistics.

pub mod oracle;
pub mod scenarios;
pub mod stats;
pub mod trials;

pub use oracle::{max_abs_diff, oracle_walk, transition_matrix};
pub use scenarios::{run_named, run_scenario, scenario_names, Scenario, ScenarioOutput, Task};
pub use stats::{summarize, summarize_lengths, BoxPlot, TrialStats};
pub use trials::{run_pair, run_trials, sample_pairs, TrialBatch, TrialReport, TrialRow};
