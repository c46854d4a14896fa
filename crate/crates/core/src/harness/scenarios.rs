//! Figure replications as data.
//!
//! Each built-in scenario ships as a TOML file under `scenarios/`. Fields the
//! figures leave open are filled in there and flagged with a
//! `reconstruction` note.

use serde::{Deserialize, Serialize};

use crate::agent::{
    best_candidates, navigate, train, wire_specs, AgentConfig, AgentState, PenaltySpec, RewardSpec, RunResult,
};
use crate::dynamics::normalize_display;
use crate::envspec::EnvSpec;
use crate::error::{CglError, Result};
use crate::graph::{EnvironmentGraph, NodeId};
use crate::harness::trials::{run_trials, TrialBatch, TrialReport};
use crate::heatmap::HeatmapPanel;

const BUILTIN: &[(&str, &str)] = &[
    ("fig3a", include_str!("../../scenarios/fig3a.toml")),
    ("fig3b", include_str!("../../scenarios/fig3b.toml")),
    ("fig3c", include_str!("../../scenarios/fig3c.toml")),
    ("fig4a", include_str!("../../scenarios/fig4a.toml")),
    ("fig4b", include_str!("../../scenarios/fig4b.toml")),
    ("fig4c", include_str!("../../scenarios/fig4c.toml")),
    ("fig5a", include_str!("../../scenarios/fig5a.toml")),
    ("fig5b", include_str!("../../scenarios/fig5b.toml")),
    ("fig5c", include_str!("../../scenarios/fig5c.toml")),
    ("fig5d", include_str!("../../scenarios/fig5d.toml")),
    ("fig6a", include_str!("../../scenarios/fig6a.toml")),
    ("fig6b", include_str!("../../scenarios/fig6b.toml")),
    ("fig7", include_str!("../../scenarios/fig7.toml")),
    ("fig8", include_str!("../../scenarios/fig8.toml")),
    ("fig9", include_str!("../../scenarios/fig9.toml")),
    ("fig10", include_str!("../../scenarios/fig10.toml")),
    ("fig11", include_str!("../../scenarios/fig11.toml")),
];

/// Names of the built-in scenarios, in figure order.
pub fn scenario_names() -> Vec<&'static str> {
    BUILTIN.iter().map(|(name, _)| *name).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum Task {
    /// Values the agent sees at `input` on its first step, without moving.
    /// The step applies the coincidence update only if the agent config has
    /// `navigation_plasticity` on.
    Gradient { input: NodeId },
    /// One run from each start. With `frames`, heatmaps show every step of
    /// the first run instead of one panel per run.
    Navigate {
        target: NodeId,
        starts: Vec<NodeId>,
        #[serde(default)]
        frames: bool,
    },
    /// Randomized battery; every pair gets a reward of `reward_weight` at its
    /// target.
    Trial { reward_weight: f64, pairs: usize },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub name: String,
    pub title: String,
    /// What was filled in because the figure does not say.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub reconstruction: Option<String>,
    pub env: EnvSpec,
    /// Graph generation and tie-break seed.
    #[serde(default)]
    pub seed: u64,
    #[serde(default)]
    pub agent: AgentConfig,
    #[serde(default)]
    pub rewards: Vec<RewardSpec>,
    #[serde(default)]
    pub penalties: Vec<PenaltySpec>,
    pub task: Task,
}

impl Scenario {
    pub fn builtin(name: &str) -> Result<Self> {
        let text = BUILTIN
            .iter()
            .find(|(n, _)| *n == name)
            .map(|(_, text)| *text)
            .ok_or_else(|| CglError::UnknownScenario(format!("`{name}`; known: {}", scenario_names().join(", "))))?;
        Self::from_toml(text)
    }

    pub fn from_toml(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| CglError::Validation(format!("scenario: {e}")))
    }

    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes")
    }

    /// Deep-merges `overrides` over this scenario: tables merge key by key,
    /// anything else replaces.
    pub fn with_overrides(&self, overrides: &toml::Table) -> Result<Self> {
        let mut base = toml::Table::try_from(self).expect("scenario serializes");
        merge(&mut base, overrides);
        base.try_into()
            .map_err(|e| CglError::Validation(format!("scenario override: {e}")))
    }

    /// The agent config with the scenario seed applied.
    pub fn agent_config(&self) -> AgentConfig {
        AgentConfig {
            seed: self.seed,
            ..self.agent.clone()
        }
    }

    pub fn build_env(&self) -> Result<EnvironmentGraph> {
        self.env.build(self.seed)
    }
}

fn merge(base: &mut toml::Table, overrides: &toml::Table) {
    for (key, value) in overrides {
        match (base.get_mut(key), value) {
            (Some(toml::Value::Table(b)), toml::Value::Table(o)) => merge(b, o),
            _ => {
                base.insert(key.clone(), value.clone());
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GradientOutput {
    pub input: NodeId,
    /// Raw values over the environment nodes.
    pub values: Vec<f64>,
    /// `values` scaled so the maximum is 1.
    pub normalized: Vec<f64>,
    /// Nodes of `{input} ∪ N(input)` tied for the highest value.
    pub best: Vec<NodeId>,
}

impl GradientOutput {
    /// `node,value,normalized` rows, 17 significant digits.
    pub fn to_csv(&self) -> String {
        use crate::agent::fmt_sig;
        let mut out = String::from("node,value,normalized\n");
        for (i, (v, n)) in self.values.iter().zip(&self.normalized).enumerate() {
            out.push_str(&format!("{},{},{}\n", i + 1, fmt_sig(*v, 17), fmt_sig(*n, 17)));
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum ScenarioOutput {
    Gradient(GradientOutput),
    Runs { runs: Vec<RunResult> },
    Trial(Box<TrialReport>),
}

impl ScenarioOutput {
    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("scenario output serializes");
        text.push('\n');
        text
    }

    /// Flat table for the output kind: node values, per-step runs, or
    /// per-pair trial rows.
    pub fn to_csv(&self) -> String {
        match self {
            ScenarioOutput::Gradient(g) => g.to_csv(),
            ScenarioOutput::Runs { runs } => {
                let mut out = String::from("run,start,step,node,chosen_value\n");
                for (k, run) in runs.iter().enumerate() {
                    for line in run.to_csv().lines().skip(1) {
                        out.push_str(&format!("{k},{},{line}\n", run.start));
                    }
                }
                out
            }
            ScenarioOutput::Trial(report) => report.rows_csv(),
        }
    }

    /// Heatmap panels for grid environments. Trials have none.
    pub fn panels(&self, scenario: &Scenario, env: &EnvironmentGraph) -> Result<Vec<HeatmapPanel>> {
        let n = env.node_count();
        match self {
            ScenarioOutput::Gradient(g) => Ok(vec![HeatmapPanel {
                title: format!("{} input {}", scenario.name, g.input),
                values: g.values.clone(),
                path: Vec::new(),
                marks: scenario_marks(scenario, Some(g.input)),
            }]),
            ScenarioOutput::Runs { runs } => {
                let frames = matches!(scenario.task, Task::Navigate { frames: true, .. });
                let mut panels = Vec::new();
                for run in runs {
                    let values = run
                        .values
                        .as_ref()
                        .ok_or_else(|| CglError::Unsupported("run has no recorded values to draw".into()))?;
                    if frames {
                        for (k, v) in values.iter().enumerate() {
                            panels.push(HeatmapPanel {
                                title: format!("step {}", k + 1),
                                values: v[..n].to_vec(),
                                path: run.path[..=k + 1].to_vec(),
                                marks: scenario_marks(scenario, Some(run.path[k + 1])),
                            });
                        }
                        break;
                    }
                    panels.push(HeatmapPanel {
                        title: format!("start {} {:?}", run.start, run.outcome).to_lowercase(),
                        values: values.first().map(|v| v[..n].to_vec()).unwrap_or_else(|| vec![0.0; n]),
                        path: run.path.clone(),
                        marks: scenario_marks(scenario, Some(run.start)),
                    });
                }
                Ok(panels)
            }
            ScenarioOutput::Trial(_) => Err(CglError::Unsupported(
                "trial batteries have no heatmap; use the CSV output".into(),
            )),
        }
    }
}

fn scenario_marks(scenario: &Scenario, agent: Option<NodeId>) -> Vec<(NodeId, String)> {
    let mut marks: Vec<(NodeId, String)> = scenario.rewards.iter().map(|r| (r.node, "R".to_string())).collect();
    marks.extend(scenario.penalties.iter().map(|p| (p.node, "P".to_string())));
    if let Some(v) = agent {
        marks.push((v, "A".to_string()));
    }
    marks
}

/// Runs a built-in scenario by name.
pub fn run_named(name: &str, workers: usize) -> Result<ScenarioOutput> {
    run_scenario(&Scenario::builtin(name)?, workers)
}

pub fn run_scenario(scenario: &Scenario, workers: usize) -> Result<ScenarioOutput> {
    let cfg = scenario.agent_config();
    cfg.validate()?;
    match &scenario.task {
        Task::Trial { reward_weight, pairs } => {
            if !scenario.rewards.is_empty() || !scenario.penalties.is_empty() {
                return Err(CglError::Validation(
                    "trial scenarios wire their own reward per pair; drop rewards/penalties".into(),
                ));
            }
            let batch = TrialBatch {
                env: scenario.env.clone(),
                reward_weight: *reward_weight,
                pair_count: *pairs,
                seed: scenario.seed,
                agent: cfg,
            };
            Ok(ScenarioOutput::Trial(Box::new(run_trials(&batch, workers)?)))
        }
        Task::Gradient { input } => {
            let env = scenario.build_env()?;
            let trained = train(
                &env,
                &wire_specs(&env, &cfg, &scenario.rewards, &scenario.penalties)?,
                &cfg,
            )?;
            let mut agent = AgentState::new(&env, trained, *input)?;
            let values = agent.observe(&env, &cfg)?;
            let sensory = values.as_slice()[..env.node_count()].to_vec();
            Ok(ScenarioOutput::Gradient(GradientOutput {
                input: *input,
                best: best_candidates(&values, &env, *input)?,
                normalized: normalize_display(&sensory),
                values: sensory,
            }))
        }
        Task::Navigate { target, starts, .. } => {
            let env = scenario.build_env()?;
            let cfg = AgentConfig {
                record_values: true,
                ..cfg
            };
            let trained = train(
                &env,
                &wire_specs(&env, &cfg, &scenario.rewards, &scenario.penalties)?,
                &cfg,
            )?;
            let runs = starts
                .iter()
                .map(|&s| navigate(&env, &trained, s, *target, &cfg))
                .collect::<Result<Vec<_>>>()?;
            Ok(ScenarioOutput::Runs { runs })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn all_builtins_parse_and_round_trip() {
        for name in scenario_names() {
            let s = Scenario::builtin(name).unwrap();
            assert_eq!(s.name, name);
            assert_eq!(Scenario::from_toml(&s.to_toml()).unwrap(), s);
        }
        assert!(matches!(Scenario::builtin("fig99"), Err(CglError::UnknownScenario(_))));
    }

    #[test]
    fn overrides_merge_into_agent() {
        let s = Scenario::builtin("fig4a").unwrap();
        let o: toml::Table = toml::from_str("seed = 7\n[agent]\nfloor = 0.1\n").unwrap();
        let m = s.with_overrides(&o).unwrap();
        assert_eq!(m.seed, 7);
        assert_eq!(m.agent.floor, 0.1);
        assert_eq!(m.agent.recursions, 6);
        let bad: toml::Table = toml::from_str("[agent]\nfloor_typo = 1\n").unwrap();
        assert!(s.with_overrides(&bad).is_err());
    }

    #[test]
    fn fig3a_is_symmetric() {
        let ScenarioOutput::Gradient(g) = run_named("fig3a", 1).unwrap() else {
            panic!("expected a gradient")
        };
        assert_eq!(g.best, vec![13]);
        for k in 0..12 {
            assert!((g.values[k] - g.values[24 - k]).abs() < 1e-12);
        }
        assert_eq!(g.normalized.iter().copied().fold(0.0, f64::max), 1.0);
    }

    #[test]
    fn fig7_has_a_frame_per_step() {
        let s = Scenario::builtin("fig7").unwrap();
        let out = run_scenario(&s, 1).unwrap();
        let ScenarioOutput::Runs { runs } = &out else { panic!() };
        let panels = out.panels(&s, &s.build_env().unwrap()).unwrap();
        assert_eq!(panels.len(), runs[0].path.len() - 1);
    }
}
