//! Randomized start/target batteries.
//!
//! One environment is built per battery. Each sampled ordered pair gets a
//! fresh matrix with the reward wired at its target, a single training pass,
//! and one navigation run. Pairs are independent, so they run in parallel;
//! every pair's RNG seed is derived from the master seed and the pair index,
//! which keeps results identical for any worker count.

use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::agent::{fmt_sig, navigate, train, wired_matrix, AgentConfig, Outcome};
use crate::envspec::EnvSpec;
use crate::error::{CglError, Result};
use crate::graph::{EnvironmentGraph, GraphKind, NodeId};
use crate::harness::stats::{summarize_lengths, TrialStats};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialBatch {
    pub env: EnvSpec,
    pub reward_weight: f64,
    pub pair_count: usize,
    pub seed: u64,
    /// Agent settings shared by every pair; `seed` is replaced per pair.
    pub agent: AgentConfig,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialRow {
    pub index: usize,
    pub start: NodeId,
    pub target: NodeId,
    pub seed: u64,
    pub outcome: Outcome,
    pub path_length: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialReport {
    pub batch: TrialBatch,
    pub graph_kind: GraphKind,
    pub node_count: usize,
    pub edge_count: usize,
    /// Number of ordered `(start, target)` pairs with `start != target`.
    pub population: usize,
    pub stats: TrialStats,
    pub rows: Vec<TrialRow>,
}

impl TrialReport {
    /// One row per pair: `index,start,target,seed,outcome,path_length`.
    pub fn rows_csv(&self) -> String {
        let mut out = String::from("index,start,target,seed,outcome,path_length\n");
        for r in &self.rows {
            let outcome = match r.outcome {
                Outcome::Success => "success",
                Outcome::Failure => "failure",
            };
            let len = r.path_length.map(|l| l.to_string()).unwrap_or_default();
            out.push_str(&format!(
                "{},{},{},{},{},{}\n",
                r.index, r.start, r.target, r.seed, outcome, len
            ));
        }
        out
    }

    /// `path_length,count` columns for plotting.
    pub fn histogram_csv(&self) -> String {
        let mut out = String::from("path_length,count\n");
        for (len, count) in &self.stats.histogram {
            out.push_str(&format!("{len},{count}\n"));
        }
        out
    }

    /// Summary numbers at 9 significant digits.
    pub fn summary_csv(&self) -> String {
        let s = &self.stats;
        let opt = |v: Option<f64>| v.map(|v| fmt_sig(v, 9)).unwrap_or_default();
        let mut out = String::from("metric,value\n");
        out.push_str(&format!("runs,{}\n", s.runs));
        out.push_str(&format!("successes,{}\n", s.successes));
        out.push_str(&format!("success_rate,{}\n", fmt_sig(s.success_rate, 9)));
        out.push_str(&format!("median_path,{}\n", opt(s.median_path.map(|m| m as f64))));
        out.push_str(&format!("mean_path,{}\n", opt(s.mean_path)));
        if let Some(b) = &s.box_plot {
            for (name, v) in [
                ("min", b.min),
                ("q1", b.q1),
                ("q2", b.median),
                ("q3", b.q3),
                ("max", b.max),
            ] {
                out.push_str(&format!("{name},{}\n", fmt_sig(v, 9)));
            }
        }
        out
    }
}

/// SplitMix64 finalizer over `(master, stream, index)`.
pub fn derive_seed(master: u64, stream: u64, index: u64) -> u64 {
    let mut z =
        master ^ stream.wrapping_mul(0xD1B5_4A32_D192_ED03) ^ index.wrapping_add(1).wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

const PAIR_STREAM: u64 = 1;
const RUN_STREAM: u64 = 2;

/// Distinct ordered pairs with `start != target`, sampled without replacement.
pub fn sample_pairs(node_count: usize, pair_count: usize, seed: u64) -> Result<Vec<(NodeId, NodeId)>> {
    let population = node_count * node_count.saturating_sub(1);
    if pair_count > population {
        return Err(CglError::InvalidParameter(format!(
            "{pair_count} pairs requested but only {population} ordered pairs exist"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(derive_seed(seed, PAIR_STREAM, 0));
    Ok(sample(&mut rng, population, pair_count)
        .into_iter()
        .map(|p| {
            let start = p / (node_count - 1) + 1;
            let other = p % (node_count - 1) + 1;
            let target = if other < start { other } else { other + 1 };
            (start, target)
        })
        .collect())
}

/// Trains a fresh agent with a reward at `target` and runs it from `start`.
pub fn run_pair(
    env: &EnvironmentGraph,
    start: NodeId,
    target: NodeId,
    reward_weight: f64,
    cfg: &AgentConfig,
) -> Result<crate::agent::RunResult> {
    let wired = wired_matrix(env, cfg, &[(target, reward_weight)], &[])?;
    let trained = train(env, &wired, cfg)?;
    navigate(env, &trained, start, target, cfg)
}

/// Runs a battery. `workers == 0` uses rayon's default thread count.
pub fn run_trials(batch: &TrialBatch, workers: usize) -> Result<TrialReport> {
    batch.agent.validate()?;
    let env = batch.env.build(batch.seed)?;
    let n = env.node_count();
    let pairs = sample_pairs(n, batch.pair_count, batch.seed)?;

    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(workers)
        .build()
        .map_err(|e| CglError::Unsupported(format!("thread pool: {e}")))?;
    let rows: Vec<TrialRow> = pool.install(|| {
        pairs
            .par_iter()
            .enumerate()
            .map(|(index, &(start, target))| {
                let seed = derive_seed(batch.seed, RUN_STREAM, index as u64);
                let cfg = AgentConfig {
                    seed,
                    record_values: false,
                    ..batch.agent.clone()
                };
                let run = run_pair(&env, start, target, batch.reward_weight, &cfg)?;
                Ok(TrialRow {
                    index,
                    start,
                    target,
                    seed,
                    outcome: run.outcome,
                    path_length: run.path_length,
                })
            })
            .collect::<Result<Vec<_>>>()
    })?;

    let outcomes: Vec<Option<usize>> = rows
        .iter()
        .map(|r| match r.outcome {
            Outcome::Success => r.path_length,
            Outcome::Failure => None,
        })
        .collect();
    let stats = summarize_lengths(&outcomes)?;
    Ok(TrialReport {
        batch: batch.clone(),
        graph_kind: env.kind().clone(),
        node_count: n,
        edge_count: env.edge_count(),
        population: n * (n - 1),
        stats,
        rows,
    })
}
