use std::path::PathBuf;

use cgl_core::agent::{InputMode, PenaltySpec, PerceptionMode, RewardSpec};
use cgl_core::{EnvSpec, FloorMode, NodeId, Normalization};
use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "cgl",
    version,
    about = "Coincident graph learning simulator",
    args_conflicts_with_subcommands = true
)]
pub struct Cli {
    /// Re-run the command recorded in a manifest.
    #[arg(long, value_name = "PATH")]
    pub from_manifest: Option<PathBuf>,
    /// With --from-manifest: write the main output here instead.
    #[arg(long, value_name = "PATH", requires = "from_manifest")]
    pub out: Option<PathBuf>,
    /// With --from-manifest: write the heatmap here instead.
    #[arg(long, value_name = "PATH", requires = "from_manifest")]
    pub heatmap: Option<PathBuf>,
    /// With --from-manifest: worker threads for trial batteries.
    #[arg(long, requires = "from_manifest")]
    pub workers: Option<usize>,
    #[command(subcommand)]
    pub command: Option<Command>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Write an environment graph file.
    Gen {
        /// `path:N`, `lattice:RxC`, `ws:N,k,beta`, or `file:PATH`.
        env: EnvSpec,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = GraphFormatArg::Edges)]
        format: GraphFormatArg,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Wire rewards/penalties, train once, and write the matrix snapshot.
    Train {
        env: EnvSpec,
        #[command(flatten)]
        wiring: WiringArgs,
        #[command(flatten)]
        agent: AgentArgs,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Train, then navigate once from `--start` to `--target`.
    Run {
        env: EnvSpec,
        #[command(flatten)]
        wiring: WiringArgs,
        #[command(flatten)]
        agent: AgentArgs,
        #[arg(long, default_value_t = 1)]
        start: NodeId,
        /// Defaults to the first reward's node.
        #[arg(long)]
        target: Option<NodeId>,
        /// Keep the full value vector of every step.
        #[arg(long)]
        trace: bool,
        #[arg(long, value_enum, default_value_t = DataFormat::Json)]
        format: DataFormat,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, value_name = "PATH.svg")]
        heatmap: Option<PathBuf>,
    },
    /// Randomized start/target battery.
    Trial {
        env: EnvSpec,
        #[arg(long)]
        reward_weight: f64,
        #[arg(long, default_value_t = 400)]
        pairs: usize,
        #[command(flatten)]
        agent: AgentArgs,
        /// Worker threads; 0 uses every core. Results do not depend on it.
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[arg(long, value_enum, default_value_t = DataFormat::Json)]
        format: DataFormat,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Replicate a figure: fig3a..fig3c, fig4a..fig4c, fig5a..fig5d, fig6a, fig6b, fig7, fig8..fig11.
    Demo {
        scenario: String,
        #[command(flatten)]
        agent: AgentArgs,
        #[arg(long, default_value_t = 0)]
        workers: usize,
        #[arg(long, value_enum, default_value_t = DataFormat::Json)]
        format: DataFormat,
        #[command(flatten)]
        output: OutputArgs,
        #[arg(long, value_name = "PATH.svg")]
        heatmap: Option<PathBuf>,
    },
    /// Check propagation on a matrix snapshot against the reference oracle.
    Oracle {
        snapshot: PathBuf,
        #[arg(long, default_value_t = 6)]
        recursions: usize,
        /// Input nodes to check; default is every node.
        #[arg(long = "input", value_name = "NODE")]
        inputs: Vec<NodeId>,
        #[arg(long, default_value_t = 1e-9)]
        tolerance: f64,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    /// Output file; stdout when absent. A manifest is written next to it.
    #[arg(long, value_name = "PATH")]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct WiringArgs {
    /// `NODE:WEIGHT`, weight above 1. Repeatable.
    #[arg(long = "reward", value_name = "NODE:WEIGHT")]
    pub rewards: Vec<RewardSpec>,
    /// `NODE:COUNT:WEIGHT`, weight in (0, 1). Repeatable.
    #[arg(long = "penalty", value_name = "NODE:COUNT:WEIGHT")]
    pub penalties: Vec<PenaltySpec>,
}

#[derive(Debug, Clone, Default, Args)]
pub struct AgentArgs {
    /// TOML file with `seed`, an `[agent]` table, and optional
    /// `[[rewards]]`/`[[penalties]]`. Flags override it.
    #[arg(long, value_name = "PATH")]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    #[arg(long)]
    pub recursions: Option<usize>,
    #[arg(long)]
    pub latent: Option<f64>,
    #[arg(long)]
    pub deinforce: Option<f64>,
    #[arg(long)]
    pub floor: Option<f64>,
    #[arg(long)]
    pub floor_mode: Option<FloorMode>,
    #[arg(long, value_name = "star|clique")]
    pub perception: Option<PerceptionMode>,
    #[arg(long, value_name = "neighborhood|node")]
    pub input_mode: Option<InputMode>,
    #[arg(long, value_name = "count|weighted")]
    pub normalization: Option<Normalization>,
    /// `dfs`, `boustrophedon`, or `file:PATH` (whitespace-separated node ids).
    #[arg(long)]
    pub walk: Option<String>,
    #[arg(long)]
    pub training_start: Option<NodeId>,
    #[arg(long)]
    pub max_steps: Option<usize>,
    #[arg(long)]
    pub stay: Option<usize>,
    /// De-inforce repeat sightings during training too.
    #[arg(long)]
    pub training_plasticity: bool,
    /// Freeze the matrix while navigating.
    #[arg(long)]
    pub frozen: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GraphFormatArg {
    Edges,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum DataFormat {
    Csv,
    Json,
}
