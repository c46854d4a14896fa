//! The behavioral loop: local perception, single-pass training, and
//! step-by-step navigation up the value gradient.
//!
//! The agent never sees coordinates. All it gets at a node is the set of
//! active inputs (the node and its neighbors); everything else comes from
//! propagating a unit input through its own coincident matrix.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::dynamics::recurse;
use crate::error::{CglError, Result};
use crate::graph::{EnvironmentGraph, GraphKind, NodeId};
use crate::matrix::{CoincidentMatrix, FloorMode, Normalization, Plasticity};
use crate::state::StateVector;

/// Relative tolerance under which two candidate values count as tied.
pub const TIE_RELATIVE_TOLERANCE: f64 = 1e-12;

/// Which coincident pairs form when the agent perceives a neighborhood.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PerceptionMode {
    /// Center node paired with each neighbor.
    #[default]
    Star,
    /// Every unordered pair inside the active set.
    Clique,
}

impl std::str::FromStr for PerceptionMode {
    type Err = CglError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "star" => Ok(Self::Star),
            "clique" => Ok(Self::Clique),
            other => Err(CglError::InvalidParameter(format!(
                "perception must be `star` or `clique`, got `{other}`"
            ))),
        }
    }
}

/// What the agent feeds into propagation at each step.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum InputMode {
    /// Unit input at the current node only.
    Node,
    /// Unit input at every perceived node: the current node and its neighbors.
    #[default]
    Neighborhood,
}

impl std::str::FromStr for InputMode {
    type Err = CglError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "node" => Ok(Self::Node),
            "neighborhood" => Ok(Self::Neighborhood),
            other => Err(CglError::InvalidParameter(format!(
                "input must be `node` or `neighborhood`, got `{other}`"
            ))),
        }
    }
}

/// Route of the single training pass.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum TrainingWalk {
    /// Depth-first from the training start, lowest id first, walking back
    /// along the tree when a branch is exhausted. Stops once every node has
    /// been visited.
    Dfs,
    /// Row sweep of a lattice: row 1 left to right, row 2 right to left, ...
    Boustrophedon,
    /// User-supplied node sequence; must be edge-contiguous and cover the graph.
    Explicit { nodes: Vec<NodeId> },
}

impl TrainingWalk {
    pub fn label(&self) -> &'static str {
        match self {
            TrainingWalk::Dfs => "dfs",
            TrainingWalk::Boustrophedon => "boustrophedon",
            TrainingWalk::Explicit { .. } => "explicit",
        }
    }

    /// Default for a graph: boustrophedon on lattices, dfs elsewhere.
    pub fn default_for(env: &EnvironmentGraph) -> Self {
        match env.kind() {
            GraphKind::Lattice { .. } => TrainingWalk::Boustrophedon,
            _ => TrainingWalk::Dfs,
        }
    }

    /// The node sequence visited during training.
    pub fn sequence(&self, env: &EnvironmentGraph, start: NodeId) -> Result<Vec<NodeId>> {
        env.check_node(start)?;
        match self {
            TrainingWalk::Dfs => Ok(dfs_walk(env, start)),
            TrainingWalk::Boustrophedon => boustrophedon_walk(env, start),
            TrainingWalk::Explicit { nodes } => {
                validate_walk(env, nodes)?;
                Ok(nodes.clone())
            }
        }
    }
}

fn dfs_walk(env: &EnvironmentGraph, start: NodeId) -> Vec<NodeId> {
    let n = env.node_count();
    let mut visited = vec![false; n];
    let mut stack = vec![start];
    let mut walk = vec![start];
    visited[start - 1] = true;
    let mut seen = 1;
    while seen < n {
        let Some(&here) = stack.last() else { break };
        match env.neighbors(here).iter().find(|&&u| !visited[u - 1]) {
            Some(&next) => {
                visited[next - 1] = true;
                seen += 1;
                stack.push(next);
                walk.push(next);
            }
            None => {
                stack.pop();
                if let Some(&back) = stack.last() {
                    walk.push(back);
                }
            }
        }
    }
    walk
}

fn boustrophedon_walk(env: &EnvironmentGraph, start: NodeId) -> Result<Vec<NodeId>> {
    let (rows, cols) = env
        .lattice_shape()
        .ok_or_else(|| CglError::Unsupported("boustrophedon training walk needs a lattice environment".into()))?;
    if start != 1 {
        return Err(CglError::InvalidParameter(format!(
            "boustrophedon sweep starts at node 1, not {start}"
        )));
    }
    let mut walk = Vec::with_capacity(rows * cols);
    for r in 0..rows {
        let row = (0..cols).map(|c| r * cols + c + 1);
        if r % 2 == 0 {
            walk.extend(row);
        } else {
            walk.extend(row.rev());
        }
    }
    Ok(walk)
}

fn validate_walk(env: &EnvironmentGraph, nodes: &[NodeId]) -> Result<()> {
    if nodes.is_empty() {
        return Err(CglError::Validation("training walk is empty".into()));
    }
    for &v in nodes {
        env.check_node(v)?;
    }
    for (k, pair) in nodes.windows(2).enumerate() {
        if !env.has_edge(pair[0], pair[1]) {
            return Err(CglError::Validation(format!(
                "training walk step {} moves {} -> {} along no environment edge",
                k + 1,
                pair[0],
                pair[1]
            )));
        }
    }
    let mut covered = vec![false; env.node_count()];
    for &v in nodes {
        covered[v - 1] = true;
    }
    if let Some(missing) = covered.iter().position(|c| !c) {
        return Err(CglError::Validation(format!(
            "training walk never visits node {}",
            missing + 1
        )));
    }
    Ok(())
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AgentConfig {
    pub recursions: usize,
    pub latent: f64,
    pub deinforcement: f64,
    pub floor: f64,
    pub floor_mode: FloorMode,
    pub perception: PerceptionMode,
    pub input: InputMode,
    pub normalization: Normalization,
    /// `None` picks [`TrainingWalk::default_for`] the environment.
    pub training_walk: Option<TrainingWalk>,
    pub training_start: NodeId,
    /// `None` means one step per environment node.
    pub max_steps: Option<usize>,
    pub stay_required: usize,
    pub seed: u64,
    /// De-inforce edges that are seen again during the training pass. When
    /// off, training only creates edges.
    pub training_plasticity: bool,
    /// Apply coincidence updates while navigating. Turning this off freezes
    /// the trained matrix for the whole run.
    pub navigation_plasticity: bool,
    /// Keep the full value vector of every step in the run result.
    pub record_values: bool,
}

impl Default for AgentConfig {
    fn default() -> Self {
        Self {
            recursions: 6,
            latent: 0.0,
            deinforcement: 0.5,
            floor: 0.05,
            floor_mode: FloorMode::Clamp,
            perception: PerceptionMode::Star,
            input: InputMode::Neighborhood,
            normalization: Normalization::Count,
            training_walk: None,
            training_start: 1,
            max_steps: None,
            stay_required: 3,
            seed: 0,
            training_plasticity: false,
            navigation_plasticity: true,
            record_values: false,
        }
    }
}

impl AgentConfig {
    pub fn plasticity(&self) -> Plasticity {
        Plasticity {
            deinforcement: self.deinforcement,
            floor: self.floor,
            floor_mode: self.floor_mode,
        }
    }

    pub fn validate(&self) -> Result<()> {
        self.plasticity().validate()?;
        if !(self.latent.is_finite() && self.latent >= 0.0) {
            return Err(CglError::InvalidParameter(format!(
                "latent weight must be >= 0, got {}",
                self.latent
            )));
        }
        if self.stay_required == 0 {
            return Err(CglError::InvalidParameter("stay_required must be >= 1".into()));
        }
        if self.max_steps == Some(0) {
            return Err(CglError::InvalidParameter("max_steps must be >= 1".into()));
        }
        if self.training_start == 0 {
            return Err(CglError::InvalidParameter("training_start is a 1-based node id".into()));
        }
        Ok(())
    }

    pub fn walk_for(&self, env: &EnvironmentGraph) -> TrainingWalk {
        self.training_walk
            .clone()
            .unwrap_or_else(|| TrainingWalk::default_for(env))
    }

    pub fn max_steps_for(&self, env: &EnvironmentGraph) -> usize {
        self.max_steps.unwrap_or(env.node_count())
    }
}

/// Active inputs at one node and the coincident pairs they form.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Percept {
    /// `{v} ∪ N(v)`, ascending.
    pub active: Vec<NodeId>,
    pub pairs: Vec<(NodeId, NodeId)>,
}

pub fn perceive(env: &EnvironmentGraph, v: NodeId, mode: PerceptionMode) -> Result<Percept> {
    env.check_node(v)?;
    let neighbors = env.neighbors(v);
    let mut active = Vec::with_capacity(neighbors.len() + 1);
    active.push(v);
    active.extend_from_slice(neighbors);
    active.sort_unstable();
    let pairs = match mode {
        PerceptionMode::Star => neighbors.iter().map(|&u| (v, u)).collect(),
        PerceptionMode::Clique => {
            let mut pairs = Vec::new();
            for (a, &i) in active.iter().enumerate() {
                for &j in &active[a + 1..] {
                    pairs.push((i, j));
                }
            }
            pairs
        }
    };
    Ok(Percept { active, pairs })
}

fn absorb(c: &mut CoincidentMatrix, percept: &Percept) -> Result<()> {
    let x = StateVector::indicator_set(c.size(), &percept.active)?;
    c.apply_coincidence(&x, &percept.pairs)
}

/// Coincidence without de-inforcement: only absent edges change.
fn connect(c: &mut CoincidentMatrix, percept: &Percept) -> Result<()> {
    for &(a, b) in &percept.pairs {
        if c.get(a, b) == 0.0 {
            c.set_conductance(a, b, 1.0)?;
        }
    }
    Ok(())
}

/// Trains `wired` with one pass over the environment.
///
/// `wired` must already hold any reward/penalty nodes. At every node of the
/// training walk the agent perceives its neighborhood and connects the
/// coincident pairs; with `training_plasticity` on it applies the full
/// coincidence update instead, so repeat sightings de-inforce. Propagation
/// outputs are not used while training (the route is scripted), so they are
/// not computed.
pub fn train(env: &EnvironmentGraph, wired: &CoincidentMatrix, cfg: &AgentConfig) -> Result<CoincidentMatrix> {
    cfg.validate()?;
    check_matrix_matches(env, wired)?;
    let mut c = wired.clone();
    c.set_plasticity(cfg.plasticity())?;
    let walk = cfg.walk_for(env).sequence(env, cfg.training_start)?;
    c.set_normalization(cfg.normalization);
    for v in walk {
        let percept = perceive(env, v, cfg.perception)?;
        if cfg.training_plasticity {
            absorb(&mut c, &percept)?;
        } else {
            connect(&mut c, &percept)?;
        }
    }
    Ok(c)
}

fn check_matrix_matches(env: &EnvironmentGraph, c: &CoincidentMatrix) -> Result<()> {
    if c.sensory_count() != env.node_count() {
        return Err(CglError::DimensionMismatch {
            expected: env.node_count(),
            actual: c.sensory_count(),
        });
    }
    Ok(())
}

/// Highest-valued node among `v` and its neighbors. Ties (within
/// [`TIE_RELATIVE_TOLERANCE`]) are broken uniformly with `rng`; the rng is
/// only drawn from when there is a tie.
pub fn choose_next<R: Rng + ?Sized>(
    values: &StateVector,
    env: &EnvironmentGraph,
    v: NodeId,
    rng: &mut R,
) -> Result<NodeId> {
    let tied = best_candidates(values, env, v)?;
    Ok(if tied.len() == 1 {
        tied[0]
    } else {
        tied[rng.gen_range(0..tied.len())]
    })
}

/// Every node of `{v} ∪ N(v)` whose value ties for the maximum, ascending.
pub fn best_candidates(values: &StateVector, env: &EnvironmentGraph, v: NodeId) -> Result<Vec<NodeId>> {
    env.check_node(v)?;
    if values.len() < env.node_count() {
        return Err(CglError::DimensionMismatch {
            expected: env.node_count(),
            actual: values.len(),
        });
    }
    let mut candidates: Vec<NodeId> = Vec::with_capacity(env.degree(v) + 1);
    candidates.push(v);
    candidates.extend_from_slice(env.neighbors(v));
    candidates.sort_unstable();

    let best = candidates
        .iter()
        .map(|&u| values.value(u))
        .fold(f64::NEG_INFINITY, f64::max);
    Ok(candidates
        .into_iter()
        .filter(|&u| best - values.value(u) <= TIE_RELATIVE_TOLERANCE * best.abs())
        .collect())
}

/// A reward wired to `node`, written `NODE:WEIGHT`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RewardSpec {
    pub node: NodeId,
    pub weight: f64,
}

/// `count` penalty edges at `node`, written `NODE:COUNT:WEIGHT`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PenaltySpec {
    pub node: NodeId,
    pub count: usize,
    pub weight: f64,
}

fn split_fields<'a, const N: usize>(text: &'a str, shape: &str) -> Result<[&'a str; N]> {
    let parts: Vec<&str> = text.split(':').collect();
    parts
        .try_into()
        .map_err(|_| CglError::InvalidParameter(format!("expected {shape}, got `{text}`")))
}

fn parse_field<T: std::str::FromStr>(field: &str, what: &str, text: &str) -> Result<T> {
    field
        .trim()
        .parse()
        .map_err(|_| CglError::InvalidParameter(format!("bad {what} `{field}` in `{text}`")))
}

impl std::str::FromStr for RewardSpec {
    type Err = CglError;

    fn from_str(s: &str) -> Result<Self> {
        let [node, weight] = split_fields(s, "NODE:WEIGHT")?;
        Ok(Self {
            node: parse_field(node, "node", s)?,
            weight: parse_field(weight, "weight", s)?,
        })
    }
}

impl std::str::FromStr for PenaltySpec {
    type Err = CglError;

    fn from_str(s: &str) -> Result<Self> {
        let [node, count, weight] = split_fields(s, "NODE:COUNT:WEIGHT")?;
        Ok(Self {
            node: parse_field(node, "node", s)?,
            count: parse_field(count, "edge count", s)?,
            weight: parse_field(weight, "weight", s)?,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Success,
    Failure,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StepRecord {
    pub step: usize,
    /// Node the agent moved to (or stayed on) at this step.
    pub node: NodeId,
    /// Propagated value of that node when it was chosen.
    pub chosen_value: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RunResult {
    pub config: AgentConfig,
    pub seed: u64,
    pub walk: String,
    pub start: NodeId,
    pub target: NodeId,
    pub outcome: Outcome,
    /// Start node followed by the position after every step.
    pub path: Vec<NodeId>,
    /// Moves until the first arrival at the target; `None` if never reached.
    pub path_length: Option<usize>,
    pub steps: Vec<StepRecord>,
    /// Sensory part of the propagated values, one vector per step.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub values: Option<Vec<Vec<f64>>>,
}

impl RunResult {
    pub fn succeeded(&self) -> bool {
        self.outcome == Outcome::Success
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(self).expect("run result serializes");
        text.push('\n');
        text
    }

    /// `step,node,chosen_value` rows, values at 17 significant digits.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("step,node,chosen_value\n");
        for s in &self.steps {
            out.push_str(&format!("{},{},{}\n", s.step, s.node, fmt_sig(s.chosen_value, 17)));
        }
        out
    }
}

/// Formats with `digits` significant digits in scientific notation, which
/// parses back to the same `f64` when `digits >= 17`.
pub fn fmt_sig(value: f64, digits: usize) -> String {
    format!("{:.*e}", digits.saturating_sub(1), value)
}

/// One agent's evolving state during a run.
#[derive(Debug, Clone)]
pub struct AgentState {
    pub position: NodeId,
    pub step_index: usize,
    pub matrix: CoincidentMatrix,
    previous_input: StateVector,
}

impl AgentState {
    pub fn new(env: &EnvironmentGraph, matrix: CoincidentMatrix, start: NodeId) -> Result<Self> {
        env.check_node(start)?;
        check_matrix_matches(env, &matrix)?;
        let previous_input = StateVector::zeros(matrix.size());
        Ok(Self {
            position: start,
            step_index: 0,
            matrix,
            previous_input,
        })
    }

    /// Perceive at the current node, apply the coincidence update (if
    /// `navigation_plasticity`), and propagate the input. Does not move.
    pub fn observe(&mut self, env: &EnvironmentGraph, cfg: &AgentConfig) -> Result<StateVector> {
        let v = self.position;
        let percept = perceive(env, v, cfg.perception)?;
        if cfg.navigation_plasticity {
            absorb(&mut self.matrix, &percept)?;
        }
        let x = match cfg.input {
            InputMode::Node => StateVector::indicator(self.matrix.size(), v)?,
            InputMode::Neighborhood => StateVector::indicator_set(self.matrix.size(), &percept.active)?,
        };
        let values = recurse(&x, &self.previous_input, &self.matrix, cfg.recursions, cfg.latent)?;
        self.previous_input = x;
        Ok(values)
    }

    /// [`observe`](Self::observe), then move to the best candidate. Returns
    /// the new position and the propagated values.
    pub fn step<R: Rng + ?Sized>(
        &mut self,
        env: &EnvironmentGraph,
        cfg: &AgentConfig,
        rng: &mut R,
    ) -> Result<(NodeId, StateVector)> {
        let values = self.observe(env, cfg)?;
        let next = choose_next(&values, env, self.position, rng)?;
        self.position = next;
        self.step_index += 1;
        Ok((next, values))
    }
}

/// Navigates from `start` toward `target` on a copy of `trained`.
///
/// The agent must reach the target within `max_steps` moves and then stay on
/// it for `stay_required` further consecutive steps. Leaving the target
/// resets the stay count; a later return still counts if it happens within
/// `max_steps`.
pub fn navigate(
    env: &EnvironmentGraph,
    trained: &CoincidentMatrix,
    start: NodeId,
    target: NodeId,
    cfg: &AgentConfig,
) -> Result<RunResult> {
    cfg.validate()?;
    env.check_node(start)?;
    env.check_node(target)?;
    let mut matrix = trained.clone();
    matrix.set_plasticity(cfg.plasticity())?;
    matrix.set_normalization(cfg.normalization);
    let mut agent = AgentState::new(env, matrix, start)?;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let max_steps = cfg.max_steps_for(env);

    let mut path = vec![start];
    let mut steps = Vec::new();
    let mut recorded = cfg.record_values.then(Vec::new);
    let mut first_arrival = (start == target).then_some(0);
    // Step at which the current stay on the target began.
    let mut streak_start = first_arrival;
    let mut held = 0;
    let mut outcome = Outcome::Failure;

    loop {
        let in_time = match streak_start {
            Some(arrived) => arrived <= max_steps,
            None => agent.step_index < max_steps,
        };
        if !in_time {
            break;
        }
        let before = agent.position;
        let (next, values) = agent.step(env, cfg, &mut rng)?;
        let step = agent.step_index;
        steps.push(StepRecord {
            step,
            node: next,
            chosen_value: values.value(next),
        });
        if let Some(rec) = recorded.as_mut() {
            rec.push(values.as_slice()[..env.node_count()].to_vec());
        }
        path.push(next);

        if before == target && next == target {
            held += 1;
        } else if next == target {
            held = 0;
            streak_start = Some(step);
            first_arrival.get_or_insert(step);
        } else {
            held = 0;
            streak_start = None;
        }
        if held >= cfg.stay_required {
            outcome = Outcome::Success;
            break;
        }
    }

    Ok(RunResult {
        config: cfg.clone(),
        seed: cfg.seed,
        walk: cfg.walk_for(env).label().to_string(),
        start,
        target,
        outcome,
        path,
        path_length: first_arrival,
        steps,
        values: recorded,
    })
}

/// Fresh matrix for `env` with the given rewards `(node, weight)` and
/// penalties `(node, edge_count, weight)` wired in, ready for training.
/// The matrix uses the config's normalization.
pub fn wired_matrix(
    env: &EnvironmentGraph,
    cfg: &AgentConfig,
    rewards: &[(NodeId, f64)],
    penalties: &[(NodeId, usize, f64)],
) -> Result<CoincidentMatrix> {
    let mut c = CoincidentMatrix::new(env.node_count(), cfg.plasticity())?;
    c.set_normalization(cfg.normalization);
    for &(node, weight) in rewards {
        c.wire_reward(node, weight)?;
    }
    for &(node, count, weight) in penalties {
        c.wire_penalty(node, count, weight)?;
    }
    Ok(c)
}

/// [`wired_matrix`] from parsed specs.
pub fn wire_specs(
    env: &EnvironmentGraph,
    cfg: &AgentConfig,
    rewards: &[RewardSpec],
    penalties: &[PenaltySpec],
) -> Result<CoincidentMatrix> {
    let r: Vec<_> = rewards.iter().map(|r| (r.node, r.weight)).collect();
    let p: Vec<_> = penalties.iter().map(|p| (p.node, p.count, p.weight)).collect();
    wired_matrix(env, cfg, &r, &p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_lattice, generate_path};

    #[test]
    fn star_and_clique_perception() {
        let g = generate_path(25).unwrap();
        let p = perceive(&g, 13, PerceptionMode::Star).unwrap();
        assert_eq!(p.active, vec![12, 13, 14]);
        assert_eq!(p.pairs, vec![(13, 12), (13, 14)]);
        let p = perceive(&g, 13, PerceptionMode::Clique).unwrap();
        assert_eq!(p.pairs, vec![(12, 13), (12, 14), (13, 14)]);
        let p = perceive(&g, 1, PerceptionMode::Star).unwrap();
        assert_eq!((p.active, p.pairs), (vec![1, 2], vec![(1, 2)]));
        assert!(perceive(&g, 26, PerceptionMode::Star).is_err());
    }

    #[test]
    fn dfs_walk_on_path_and_tree() {
        let g = generate_path(5).unwrap();
        assert_eq!(dfs_walk(&g, 1), vec![1, 2, 3, 4, 5]);
        assert_eq!(dfs_walk(&g, 3), vec![3, 2, 1, 2, 3, 4, 5]);
        let star = EnvironmentGraph::from_edges(4, [(1, 2), (1, 3), (1, 4)], GraphKind::Custom).unwrap();
        assert_eq!(dfs_walk(&star, 1), vec![1, 2, 1, 3, 1, 4]);
    }

    #[test]
    fn boustrophedon_walk_is_contiguous() {
        let g = generate_lattice(3, 3).unwrap();
        let walk = TrainingWalk::Boustrophedon.sequence(&g, 1).unwrap();
        assert_eq!(walk, vec![1, 2, 3, 6, 5, 4, 7, 8, 9]);
        assert!(TrainingWalk::Boustrophedon
            .sequence(&generate_path(4).unwrap(), 1)
            .is_err());
    }

    #[test]
    fn explicit_walk_validation() {
        let g = generate_path(4).unwrap();
        let ok = TrainingWalk::Explicit {
            nodes: vec![2, 1, 2, 3, 4],
        };
        assert!(ok.sequence(&g, 1).is_ok());
        let gap = TrainingWalk::Explicit { nodes: vec![1, 3, 4] };
        assert!(gap.sequence(&g, 1).is_err());
        let partial = TrainingWalk::Explicit { nodes: vec![1, 2, 3] };
        assert!(partial.sequence(&g, 1).is_err());
    }

    #[test]
    fn path_training_conductances() {
        let g = generate_path(25).unwrap();
        let mut cfg = AgentConfig::default();
        let c = train(&g, &CoincidentMatrix::new(25, cfg.plasticity()).unwrap(), &cfg).unwrap();
        assert!(c.entries().iter().all(|e| e.2 == 1.0));
        assert_eq!(c.entries().len(), 24);
        assert_eq!(c.normalization(), Normalization::Count);

        // seen from both ends, so de-inforced once
        cfg.training_plasticity = true;
        let c = train(&g, &CoincidentMatrix::new(25, cfg.plasticity()).unwrap(), &cfg).unwrap();
        for (u, v) in g.edges() {
            assert_eq!(c.get(u, v), 0.5, "edge ({u}, {v})");
        }
    }

    #[test]
    fn wiring_specs_parse() {
        let r: RewardSpec = "64:3".parse().unwrap();
        assert_eq!(r, RewardSpec { node: 64, weight: 3.0 });
        let p: PenaltySpec = "21:2:0.5".parse().unwrap();
        assert_eq!(
            p,
            PenaltySpec {
                node: 21,
                count: 2,
                weight: 0.5
            }
        );
        assert!("64".parse::<RewardSpec>().is_err());
        assert!("21:x:0.5".parse::<PenaltySpec>().is_err());
        assert!("21:2:0.5:1".parse::<PenaltySpec>().is_err());
    }

    #[test]
    fn choose_next_prefers_strict_max() {
        let g = generate_path(5).unwrap();
        let values = StateVector::new(vec![0.0, 0.1, 0.5, 0.2, 0.0]).unwrap();
        let mut rng = ChaCha8Rng::seed_from_u64(0);
        assert_eq!(choose_next(&values, &g, 3, &mut rng).unwrap(), 3);
        let values = StateVector::new(vec![0.0, 0.1, 0.2, 0.3, 0.0]).unwrap();
        assert_eq!(choose_next(&values, &g, 3, &mut rng).unwrap(), 4);
    }

    #[test]
    fn ties_use_rng_reproducibly() {
        let g = generate_path(5).unwrap();
        let values = StateVector::new(vec![0.0, 0.3, 0.3, 0.3, 0.0]).unwrap();
        let pick = |seed| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            choose_next(&values, &g, 3, &mut rng).unwrap()
        };
        let picks: Vec<_> = (0..64).map(pick).collect();
        assert_eq!(picks, (0..64).map(pick).collect::<Vec<_>>());
        for node in [2, 3, 4] {
            assert!(picks.contains(&node));
        }
    }

    #[test]
    fn start_on_target_holds() {
        let g = generate_lattice(4, 4).unwrap();
        let cfg = AgentConfig::default();
        let wired = wired_matrix(&g, &cfg, &[(16, 3.0)], &[]).unwrap();
        let trained = train(&g, &wired, &cfg).unwrap();
        let run = navigate(&g, &trained, 16, 16, &cfg).unwrap();
        assert!(run.succeeded());
        assert_eq!(run.path_length, Some(0));
        assert_eq!(run.path, vec![16, 16, 16, 16]);
    }

    #[test]
    fn config_validation() {
        let bad = AgentConfig {
            deinforcement: 1.0,
            ..AgentConfig::default()
        };
        assert!(bad.validate().is_err());
        let bad = AgentConfig {
            stay_required: 0,
            ..AgentConfig::default()
        };
        assert!(bad.validate().is_err());
    }

    #[test]
    fn csv_values_round_trip() {
        let v = 0.1f64 + 0.2;
        assert_eq!(fmt_sig(v, 17).parse::<f64>().unwrap().to_bits(), v.to_bits());
    }
}
