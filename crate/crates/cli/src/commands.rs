//! Resolving parsed arguments into invocations, and executing them.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use cgl_core::agent::{fmt_sig, navigate, train, wire_specs, PenaltySpec, RewardSpec, RunResult, TrainingWalk};
use cgl_core::graph_io::{to_edge_list, to_json as graph_json};
use cgl_core::harness::{
    max_abs_diff, oracle_walk, run_scenario, run_trials, Scenario, ScenarioOutput, TrialBatch, TrialReport,
};
use cgl_core::heatmap::{render_svg, HeatmapPanel};
use cgl_core::{recurse, AgentConfig, CoincidentMatrix, EnvSpec, EnvironmentGraph, NodeId, StateVector};
use serde::{Deserialize, Serialize};

use crate::args::{AgentArgs, Command, DataFormat, GraphFormatArg};
use crate::error::{CliError, CliResult};
use crate::manifest::{Destinations, FileDigest, Invocation};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Status {
    Ok,
    /// The command ran but its check did not hold (navigation failed,
    /// oracle mismatch).
    Failed(String),
}

pub struct Resolved {
    pub invocation: Invocation,
    pub destinations: Destinations,
    /// Files read while resolving, e.g. config files and walk files.
    pub inputs: Vec<FileDigest>,
}

pub struct Executed {
    pub status: Status,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
}

/// Optional TOML config for `train`, `run` and `trial`.
#[derive(Debug, Default, Deserialize, Serialize)]
#[serde(default, deny_unknown_fields)]
struct ConfigFile {
    seed: Option<u64>,
    agent: toml::Table,
    rewards: Vec<RewardSpec>,
    penalties: Vec<PenaltySpec>,
}

fn read_toml(path: &Path, inputs: &mut Vec<FileDigest>) -> CliResult<toml::Table> {
    let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
    inputs.push(FileDigest::of_bytes(path, text.as_bytes()));
    toml::from_str(&text).map_err(|e| CliError::Config {
        path: path.to_path_buf(),
        message: e.to_string(),
    })
}

fn load_config(args: &AgentArgs, inputs: &mut Vec<FileDigest>) -> CliResult<ConfigFile> {
    let Some(path) = &args.config else {
        return Ok(ConfigFile::default());
    };
    let table = read_toml(path, inputs)?;
    table.try_into().map_err(|e: toml::de::Error| CliError::Config {
        path: path.clone(),
        message: e.to_string(),
    })
}

fn agent_from_table(table: toml::Table, path: Option<&PathBuf>) -> CliResult<AgentConfig> {
    table.try_into().map_err(|e: toml::de::Error| CliError::Config {
        path: path.cloned().unwrap_or_default(),
        message: e.to_string(),
    })
}

fn parse_walk(text: &str, inputs: &mut Vec<FileDigest>) -> CliResult<TrainingWalk> {
    match text {
        "dfs" => Ok(TrainingWalk::Dfs),
        "boustrophedon" => Ok(TrainingWalk::Boustrophedon),
        _ => {
            let path = Path::new(text.strip_prefix("file:").ok_or_else(|| {
                CliError::Usage(format!("--walk must be dfs, boustrophedon or file:PATH, got `{text}`"))
            })?);
            let body = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
            inputs.push(FileDigest::of_bytes(path, body.as_bytes()));
            let nodes = body
                .split_whitespace()
                .map(|t| {
                    t.parse::<NodeId>()
                        .map_err(|_| CliError::Usage(format!("walk file {}: bad node id `{t}`", path.display())))
                })
                .collect::<CliResult<Vec<_>>>()?;
            Ok(TrainingWalk::Explicit { nodes })
        }
    }
}

/// Flags win over whatever `cfg` already holds.
fn apply_flags(cfg: &mut AgentConfig, args: &AgentArgs, inputs: &mut Vec<FileDigest>) -> CliResult<()> {
    if let Some(v) = args.seed {
        cfg.seed = v;
    }
    if let Some(v) = args.recursions {
        cfg.recursions = v;
    }
    if let Some(v) = args.latent {
        cfg.latent = v;
    }
    if let Some(v) = args.deinforce {
        cfg.deinforcement = v;
    }
    if let Some(v) = args.floor {
        cfg.floor = v;
    }
    if let Some(v) = args.floor_mode {
        cfg.floor_mode = v;
    }
    if let Some(v) = args.perception {
        cfg.perception = v;
    }
    if let Some(v) = args.input_mode {
        cfg.input = v;
    }
    if let Some(v) = args.normalization {
        cfg.normalization = v;
    }
    if let Some(w) = &args.walk {
        cfg.training_walk = Some(parse_walk(w, inputs)?);
    }
    if let Some(v) = args.training_start {
        cfg.training_start = v;
    }
    if let Some(v) = args.max_steps {
        cfg.max_steps = Some(v);
    }
    if let Some(v) = args.stay {
        cfg.stay_required = v;
    }
    if args.training_plasticity {
        cfg.training_plasticity = true;
    }
    if args.frozen {
        cfg.navigation_plasticity = false;
    }
    cfg.validate()?;
    Ok(())
}

fn pick<T: Clone>(flags: &[T], from_file: Vec<T>) -> Vec<T> {
    if flags.is_empty() {
        from_file
    } else {
        flags.to_vec()
    }
}

struct Resolution {
    agent: AgentConfig,
    rewards: Vec<RewardSpec>,
    penalties: Vec<PenaltySpec>,
}

fn resolve_agent(
    args: &AgentArgs,
    rewards: &[RewardSpec],
    penalties: &[PenaltySpec],
    inputs: &mut Vec<FileDigest>,
) -> CliResult<Resolution> {
    let file = load_config(args, inputs)?;
    let mut agent = agent_from_table(file.agent, args.config.as_ref())?;
    if let Some(seed) = file.seed {
        agent.seed = seed;
    }
    apply_flags(&mut agent, args, inputs)?;
    Ok(Resolution {
        agent,
        rewards: pick(rewards, file.rewards),
        penalties: pick(penalties, file.penalties),
    })
}

pub fn resolve(command: Command) -> CliResult<Resolved> {
    let mut inputs = Vec::new();
    let (invocation, destinations) = match command {
        Command::Gen {
            env,
            seed,
            format,
            output,
        } => (
            Invocation::Gen { env, seed, format },
            Destinations {
                out: output.out,
                heatmap: None,
            },
        ),
        Command::Train {
            env,
            wiring,
            agent,
            output,
        } => {
            let r = resolve_agent(&agent, &wiring.rewards, &wiring.penalties, &mut inputs)?;
            (
                Invocation::Train {
                    env,
                    agent: r.agent,
                    rewards: r.rewards,
                    penalties: r.penalties,
                },
                Destinations {
                    out: output.out,
                    heatmap: None,
                },
            )
        }
        Command::Run {
            env,
            wiring,
            agent,
            start,
            target,
            trace,
            format,
            output,
            heatmap,
        } => {
            let mut r = resolve_agent(&agent, &wiring.rewards, &wiring.penalties, &mut inputs)?;
            let target = match target.or_else(|| r.rewards.first().map(|w| w.node)) {
                Some(t) => t,
                None => return Err(CliError::Usage("run needs --target or at least one --reward".into())),
            };
            r.agent.record_values |= trace || heatmap.is_some();
            (
                Invocation::Run {
                    env,
                    agent: r.agent,
                    rewards: r.rewards,
                    penalties: r.penalties,
                    start,
                    target,
                    format,
                },
                Destinations {
                    out: output.out,
                    heatmap,
                },
            )
        }
        Command::Trial {
            env,
            reward_weight,
            pairs,
            agent,
            workers,
            format,
            output,
        } => {
            let r = resolve_agent(&agent, &[], &[], &mut inputs)?;
            if !r.rewards.is_empty() || !r.penalties.is_empty() {
                return Err(CliError::Usage(
                    "trial wires its own reward at each target; remove rewards/penalties from the config".into(),
                ));
            }
            let batch = TrialBatch {
                env,
                reward_weight,
                pair_count: pairs,
                seed: r.agent.seed,
                agent: r.agent,
            };
            (
                Invocation::Trial { batch, workers, format },
                Destinations {
                    out: output.out,
                    heatmap: None,
                },
            )
        }
        Command::Demo {
            scenario,
            agent,
            workers,
            format,
            output,
            heatmap,
        } => {
            let mut s = Scenario::builtin(&scenario)?;
            if let Some(path) = &agent.config {
                let table = read_toml(path, &mut inputs)?;
                s = s.with_overrides(&table)?;
            }
            if let Some(seed) = agent.seed {
                s.seed = seed;
            }
            apply_flags(&mut s.agent, &agent, &mut inputs)?;
            (
                Invocation::Demo {
                    scenario: Box::new(s),
                    workers,
                    format,
                },
                Destinations {
                    out: output.out,
                    heatmap,
                },
            )
        }
        Command::Oracle {
            snapshot,
            recursions,
            inputs: nodes,
            tolerance,
            output,
        } => (
            Invocation::Oracle {
                snapshot,
                recursions,
                inputs: nodes,
                tolerance,
            },
            Destinations {
                out: output.out,
                heatmap: None,
            },
        ),
    };
    Ok(Resolved {
        invocation,
        destinations,
        inputs,
    })
}

struct Sink<'a> {
    destinations: &'a Destinations,
    outputs: Vec<FileDigest>,
}

impl Sink<'_> {
    /// Main output: the `--out` file, or stdout.
    fn main(&mut self, bytes: &[u8]) -> CliResult<()> {
        match &self.destinations.out {
            Some(path) => self.file(path.clone(), bytes),
            None => std::io::stdout()
                .write_all(bytes)
                .map_err(|e| CliError::io(Path::new("<stdout>"), e)),
        }
    }

    fn file(&mut self, path: PathBuf, bytes: &[u8]) -> CliResult<()> {
        fs::write(&path, bytes).map_err(|e| CliError::io(&path, e))?;
        self.outputs.push(FileDigest::of_bytes(&path, bytes));
        Ok(())
    }

    fn heatmap(
        &mut self,
        env: &EnvironmentGraph,
        panels: impl FnOnce() -> CliResult<Vec<HeatmapPanel>>,
    ) -> CliResult<()> {
        let Some(path) = self.destinations.heatmap.clone() else {
            return Ok(());
        };
        let svg = render_svg(env, &panels()?)?;
        self.file(path, svg.as_bytes())
    }

    /// `<out stem>.<suffix>` next to the main output; skipped on stdout.
    fn sidecar(&mut self, suffix: &str, bytes: &[u8]) -> CliResult<()> {
        let Some(out) = &self.destinations.out else {
            return Ok(());
        };
        let path = out.with_extension(suffix);
        self.file(path, bytes)
    }
}

fn build_env(env: &EnvSpec, seed: u64, inputs: &mut Vec<FileDigest>) -> CliResult<EnvironmentGraph> {
    if let EnvSpec::File(path) = env {
        inputs.push(FileDigest::of_file(path)?);
    }
    Ok(env.build(seed)?)
}

pub fn execute(invocation: &Invocation, destinations: &Destinations) -> CliResult<Executed> {
    let mut inputs = Vec::new();
    let mut sink = Sink {
        destinations,
        outputs: Vec::new(),
    };
    let status = match invocation {
        Invocation::Gen { env, seed, format } => {
            let graph = build_env(env, *seed, &mut inputs)?;
            let text = match format {
                GraphFormatArg::Edges => to_edge_list(&graph),
                GraphFormatArg::Json => graph_json(&graph),
            };
            sink.main(text.as_bytes())?;
            Status::Ok
        }
        Invocation::Train {
            env,
            agent,
            rewards,
            penalties,
        } => {
            let graph = build_env(env, agent.seed, &mut inputs)?;
            let trained = train(&graph, &wire_specs(&graph, agent, rewards, penalties)?, agent)?;
            sink.main(trained.to_json().as_bytes())?;
            Status::Ok
        }
        Invocation::Run {
            env,
            agent,
            rewards,
            penalties,
            start,
            target,
            format,
        } => {
            let graph = build_env(env, agent.seed, &mut inputs)?;
            let trained = train(&graph, &wire_specs(&graph, agent, rewards, penalties)?, agent)?;
            let run = navigate(&graph, &trained, *start, *target, agent)?;
            let text = match format {
                DataFormat::Json => run.to_json(),
                DataFormat::Csv => run_csv(&run),
            };
            sink.main(text.as_bytes())?;
            sink.heatmap(&graph, || Ok(run_panels(&run, rewards, penalties, graph.node_count())))?;
            if run.succeeded() {
                Status::Ok
            } else {
                Status::Failed(format!("agent did not settle on node {target} from node {start}"))
            }
        }
        Invocation::Trial { batch, workers, format } => {
            if let EnvSpec::File(path) = &batch.env {
                inputs.push(FileDigest::of_file(path)?);
            }
            let report = run_trials(batch, *workers)?;
            write_trial(&mut sink, &report, *format)?;
            Status::Ok
        }
        Invocation::Demo {
            scenario,
            workers,
            format,
        } => {
            if let EnvSpec::File(path) = &scenario.env {
                inputs.push(FileDigest::of_file(path)?);
            }
            let output = run_scenario(scenario, *workers)?;
            match (&output, format) {
                (ScenarioOutput::Trial(report), _) => write_trial(&mut sink, report, *format)?,
                (_, DataFormat::Json) => sink.main(output.to_json().as_bytes())?,
                (_, DataFormat::Csv) => sink.main(output.to_csv().as_bytes())?,
            }
            if destinations.heatmap.is_some() {
                let graph = scenario.build_env()?;
                sink.heatmap(&graph, || Ok(output.panels(scenario, &graph)?))?;
            }
            match &output {
                ScenarioOutput::Runs { runs } => {
                    let failed: Vec<String> = runs
                        .iter()
                        .filter(|r| !r.succeeded())
                        .map(|r| r.start.to_string())
                        .collect();
                    if failed.is_empty() {
                        Status::Ok
                    } else {
                        Status::Failed(format!("navigation failed from start(s) {}", failed.join(", ")))
                    }
                }
                _ => Status::Ok,
            }
        }
        Invocation::Oracle {
            snapshot,
            recursions,
            inputs: nodes,
            tolerance,
        } => {
            inputs.push(FileDigest::of_file(snapshot)?);
            let text = fs::read_to_string(snapshot).map_err(|e| CliError::io(snapshot, e))?;
            let c = CoincidentMatrix::from_json(&text)?;
            let report = oracle_check(&c, nodes, *recursions, *tolerance)?;
            let mut json = serde_json::to_string_pretty(&report).expect("oracle report serializes");
            json.push('\n');
            sink.main(json.as_bytes())?;
            if report.pass {
                Status::Ok
            } else {
                Status::Failed(format!(
                    "propagation differs from the oracle by {:e} (tolerance {:e})",
                    report.max_abs_diff, tolerance
                ))
            }
        }
    };
    Ok(Executed {
        status,
        inputs,
        outputs: sink.outputs,
    })
}

fn write_trial(sink: &mut Sink, report: &TrialReport, format: DataFormat) -> CliResult<()> {
    match format {
        DataFormat::Json => {
            let mut text = serde_json::to_string_pretty(report).expect("trial report serializes");
            text.push('\n');
            sink.main(text.as_bytes())
        }
        DataFormat::Csv => {
            sink.main(report.rows_csv().as_bytes())?;
            sink.sidecar("summary.csv", report.summary_csv().as_bytes())?;
            sink.sidecar("histogram.csv", report.histogram_csv().as_bytes())
        }
    }
}

/// Step table; traced runs get one `vN` column per environment node.
fn run_csv(run: &RunResult) -> String {
    let Some(values) = &run.values else {
        return run.to_csv();
    };
    let n = values.first().map_or(0, Vec::len);
    let mut out = String::from("step,node,chosen_value");
    for v in 1..=n {
        out.push_str(&format!(",v{v}"));
    }
    out.push('\n');
    for (s, row) in run.steps.iter().zip(values) {
        out.push_str(&format!("{},{},{}", s.step, s.node, fmt_sig(s.chosen_value, 17)));
        for x in row {
            out.push(',');
            out.push_str(&fmt_sig(*x, 17));
        }
        out.push('\n');
    }
    out
}

fn run_panels(run: &RunResult, rewards: &[RewardSpec], penalties: &[PenaltySpec], n: usize) -> Vec<HeatmapPanel> {
    let mut fixed: Vec<(NodeId, String)> = rewards.iter().map(|r| (r.node, "R".to_string())).collect();
    fixed.extend(penalties.iter().map(|p| (p.node, "P".to_string())));
    run.values
        .iter()
        .flatten()
        .enumerate()
        .map(|(k, v)| {
            let mut marks = fixed.clone();
            marks.push((run.path[k + 1], "A".to_string()));
            HeatmapPanel {
                title: format!("step {}", k + 1),
                values: v[..n].to_vec(),
                path: run.path[..=k + 1].to_vec(),
                marks,
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OracleReport {
    pub recursions: usize,
    pub tolerance: f64,
    pub normalization: cgl_core::Normalization,
    pub checked: Vec<NodeId>,
    pub max_abs_diff: f64,
    pub pass: bool,
}

/// Propagates a unit input at each node both ways and records the worst gap.
pub fn oracle_check(
    c: &CoincidentMatrix,
    nodes: &[NodeId],
    recursions: usize,
    tolerance: f64,
) -> CliResult<OracleReport> {
    let m = c.size();
    let checked: Vec<NodeId> = if nodes.is_empty() {
        (1..=c.sensory_count()).collect()
    } else {
        nodes.to_vec()
    };
    let zeros = StateVector::zeros(m);
    let mut worst: f64 = 0.0;
    for &node in &checked {
        let x = StateVector::indicator(m, node)?;
        let fast = recurse(&x, &zeros, c, recursions, 0.0)?;
        let slow = oracle_walk(c, &x, recursions)?;
        worst = worst.max(max_abs_diff(fast.as_slice(), slow.as_slice()));
    }
    Ok(OracleReport {
        recursions,
        tolerance,
        normalization: c.normalization(),
        checked,
        max_abs_diff: worst,
        pass: worst <= tolerance,
    })
}
