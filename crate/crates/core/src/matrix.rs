//! The coincident matrix: the agent's internal weighted graph.
//!
//! Nodes `1..=sensory_count` mirror environment nodes one to one. Nodes above
//! that are auxiliary reward/penalty nodes wired in before a run. Entries are
//! conductances: symmetric, nonnegative, zero on the diagonal.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{CglError, Result};
use crate::graph::{EnvironmentGraph, NodeId};
use crate::state::StateVector;

/// Largest size kept in dense storage under [`Representation::Auto`].
pub const DENSE_LIMIT: usize = 512;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AuxiliaryKind {
    Reward,
    Penalty,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Auxiliary {
    pub id: NodeId,
    pub kind: AuxiliaryKind,
}

/// What happens when de-inforcing an edge would take it below the floor.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FloorMode {
    /// New value is `max(d * c, b)`.
    #[default]
    Clamp,
    /// New value is `d * c` even if that lands below `b`; edges at or below
    /// `b` are left alone.
    Literal,
}

impl std::str::FromStr for FloorMode {
    type Err = CglError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "clamp" => Ok(FloorMode::Clamp),
            "literal" => Ok(FloorMode::Literal),
            other => Err(CglError::InvalidParameter(format!(
                "floor mode must be `clamp` or `literal`, got `{other}`"
            ))),
        }
    }
}

/// De-inforcement parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Plasticity {
    pub deinforcement: f64,
    pub floor: f64,
    #[serde(default)]
    pub floor_mode: FloorMode,
}

impl Default for Plasticity {
    fn default() -> Self {
        Self {
            deinforcement: 0.5,
            floor: 0.05,
            floor_mode: FloorMode::Clamp,
        }
    }
}

impl Plasticity {
    pub fn validate(&self) -> Result<()> {
        let d = self.deinforcement;
        if !(d > 0.0 && d < 1.0) {
            return Err(CglError::InvalidParameter(format!(
                "de-inforcement factor must lie in (0, 1), got {d}"
            )));
        }
        if !(self.floor.is_finite() && self.floor >= 0.0) {
            return Err(CglError::InvalidParameter(format!(
                "floor must be finite and >= 0, got {}",
                self.floor
            )));
        }
        Ok(())
    }

    /// Value an existing edge `c > 0` takes after one more coincidence.
    pub fn deinforce(&self, c: f64) -> f64 {
        if c <= self.floor {
            return c;
        }
        let lowered = self.deinforcement * c;
        match self.floor_mode {
            FloorMode::Clamp => lowered.max(self.floor),
            FloorMode::Literal => lowered,
        }
    }
}

/// Divisor applied to a node's outgoing half in the cell update.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Normalization {
    /// Row sum of conductances. The update is a lazy random walk and
    /// conserves total activation.
    #[default]
    Weighted,
    /// Number of nonzero entries in the row. Conductances then act as gains:
    /// edges above 1 amplify what passes through them and edges below 1
    /// attenuate it.
    Count,
}

impl std::str::FromStr for Normalization {
    type Err = CglError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "weighted" => Ok(Normalization::Weighted),
            "count" => Ok(Normalization::Count),
            other => Err(CglError::InvalidParameter(format!(
                "normalization must be `weighted` or `count`, got `{other}`"
            ))),
        }
    }
}

/// Storage choice. `Auto` is dense up to [`DENSE_LIMIT`] nodes and sparse above.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Representation {
    #[default]
    Auto,
    Dense,
    Sparse,
}

#[derive(Debug, Clone)]
enum Storage {
    Dense(Vec<f64>),
    Sparse(Vec<BTreeMap<usize, f64>>),
}

#[derive(Debug, Clone)]
pub struct CoincidentMatrix {
    size: usize,
    sensory_count: usize,
    auxiliaries: Vec<Auxiliary>,
    plasticity: Plasticity,
    normalization: Normalization,
    representation: Representation,
    storage: Storage,
}

impl PartialEq for CoincidentMatrix {
    fn eq(&self, other: &Self) -> bool {
        self.size == other.size
            && self.sensory_count == other.sensory_count
            && self.auxiliaries == other.auxiliaries
            && self.plasticity == other.plasticity
            && self.normalization == other.normalization
            && self.entries() == other.entries()
    }
}

impl CoincidentMatrix {
    /// Empty matrix over `sensory_count` sensory nodes.
    pub fn new(sensory_count: usize, plasticity: Plasticity) -> Result<Self> {
        Self::with_representation(sensory_count, plasticity, Representation::Auto)
    }

    pub fn with_representation(
        sensory_count: usize,
        plasticity: Plasticity,
        representation: Representation,
    ) -> Result<Self> {
        if sensory_count == 0 {
            return Err(CglError::InvalidSize(
                "coincident matrix needs at least one node".into(),
            ));
        }
        plasticity.validate()?;
        Ok(Self {
            size: sensory_count,
            sensory_count,
            auxiliaries: Vec::new(),
            plasticity,
            normalization: Normalization::Weighted,
            representation,
            storage: empty_storage(sensory_count, representation),
        })
    }

    /// Matrix whose sensory block is the environment adjacency with unit
    /// conductances, as if every edge had been seen exactly once.
    pub fn from_environment(env: &EnvironmentGraph, plasticity: Plasticity) -> Result<Self> {
        let mut c = Self::new(env.node_count(), plasticity)?;
        for (u, v) in env.edges() {
            c.set_conductance(u, v, 1.0)?;
        }
        Ok(c)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn sensory_count(&self) -> usize {
        self.sensory_count
    }

    pub fn auxiliaries(&self) -> &[Auxiliary] {
        &self.auxiliaries
    }

    pub fn plasticity(&self) -> Plasticity {
        self.plasticity
    }

    pub fn set_plasticity(&mut self, plasticity: Plasticity) -> Result<()> {
        plasticity.validate()?;
        self.plasticity = plasticity;
        Ok(())
    }

    pub fn normalization(&self) -> Normalization {
        self.normalization
    }

    pub fn set_normalization(&mut self, normalization: Normalization) {
        self.normalization = normalization;
    }

    pub fn is_dense(&self) -> bool {
        matches!(self.storage, Storage::Dense(_))
    }

    pub fn is_auxiliary(&self, node: NodeId) -> bool {
        node > self.sensory_count && node <= self.size
    }

    fn check_node(&self, node: NodeId) -> Result<usize> {
        if node == 0 || node > self.size {
            Err(CglError::NodeOutOfRange { node, max: self.size })
        } else {
            Ok(node - 1)
        }
    }

    /// Conductance between two 1-based nodes. Panics when out of range.
    pub fn get(&self, i: NodeId, j: NodeId) -> f64 {
        assert!(
            i >= 1 && i <= self.size && j >= 1 && j <= self.size,
            "node out of range"
        );
        self.raw_get(i - 1, j - 1)
    }

    fn raw_get(&self, i: usize, j: usize) -> f64 {
        match &self.storage {
            Storage::Dense(data) => data[i * self.size + j],
            Storage::Sparse(rows) => rows[i].get(&j).copied().unwrap_or(0.0),
        }
    }

    fn raw_set(&mut self, i: usize, j: usize, value: f64) {
        match &mut self.storage {
            Storage::Dense(data) => {
                data[i * self.size + j] = value;
                data[j * self.size + i] = value;
            }
            Storage::Sparse(rows) => {
                if value == 0.0 {
                    rows[i].remove(&j);
                    rows[j].remove(&i);
                } else {
                    rows[i].insert(j, value);
                    rows[j].insert(i, value);
                }
            }
        }
    }

    /// Sets a symmetric conductance directly. Low-level: it does not enforce
    /// the sensory-edge ceiling, only symmetry, range, and nonnegativity.
    pub fn set_conductance(&mut self, i: NodeId, j: NodeId, value: f64) -> Result<()> {
        let (a, b) = (self.check_node(i)?, self.check_node(j)?);
        if a == b {
            return Err(CglError::InvalidParameter(format!(
                "diagonal entry ({i}, {i}) must stay 0"
            )));
        }
        if !(value.is_finite() && value >= 0.0) {
            return Err(CglError::InvalidParameter(format!(
                "conductance must be finite and >= 0, got {value}"
            )));
        }
        self.raw_set(a, b, value);
        Ok(())
    }

    /// Calls `f(j, c_ij)` for every nonzero entry of 0-based row `i`, in
    /// ascending `j`. Dense and sparse storage visit the same sequence.
    pub(crate) fn for_each_in_row(&self, i: usize, mut f: impl FnMut(usize, f64)) {
        match &self.storage {
            Storage::Dense(data) => {
                let row = &data[i * self.size..(i + 1) * self.size];
                for (j, &c) in row.iter().enumerate() {
                    if c != 0.0 {
                        f(j, c);
                    }
                }
            }
            Storage::Sparse(rows) => {
                for (&j, &c) in &rows[i] {
                    f(j, c);
                }
            }
        }
    }

    /// Nonzero neighbors of a 1-based node with their conductances.
    pub fn neighbors(&self, node: NodeId) -> Result<Vec<(NodeId, f64)>> {
        let i = self.check_node(node)?;
        let mut out = Vec::new();
        self.for_each_in_row(i, |j, c| out.push((j + 1, c)));
        Ok(out)
    }

    /// Row sums of `C`: the weighted degree of each node.
    pub fn weighted_degrees(&self) -> Vec<f64> {
        (0..self.size)
            .map(|i| {
                let mut sum = 0.0;
                self.for_each_in_row(i, |_, c| sum += c);
                sum
            })
            .collect()
    }

    /// Number of nonzero entries in each row.
    pub fn edge_counts(&self) -> Vec<f64> {
        (0..self.size)
            .map(|i| {
                let mut n = 0usize;
                self.for_each_in_row(i, |_, _| n += 1);
                n as f64
            })
            .collect()
    }

    /// Per-node divisor under the matrix's [`Normalization`].
    pub fn degrees(&self) -> Vec<f64> {
        match self.normalization {
            Normalization::Weighted => self.weighted_degrees(),
            Normalization::Count => self.edge_counts(),
        }
    }

    /// Every nonzero undirected edge once, as `(i, j, value)` with `i < j`,
    /// 1-based, in ascending order.
    pub fn entries(&self) -> Vec<(NodeId, NodeId, f64)> {
        let mut out = Vec::new();
        for i in 0..self.size {
            self.for_each_in_row(i, |j, c| {
                if j > i {
                    out.push((i + 1, j + 1, c));
                }
            });
        }
        out
    }

    /// Applies one round of coincidence detection.
    ///
    /// For each listed pair with both endpoints active, a missing edge is
    /// created with conductance `x_i * x_j` and an existing edge is
    /// de-inforced according to the matrix's [`Plasticity`]. Pairs with an
    /// inactive endpoint, and every unlisted entry, are left unchanged.
    pub fn apply_coincidence(&mut self, active: &StateVector, pairs: &[(NodeId, NodeId)]) -> Result<()> {
        active.check_len(self.size)?;
        for &(i, j) in pairs {
            let (a, b) = (self.check_node(i)?, self.check_node(j)?);
            if a == b {
                return Err(CglError::InvalidParameter(format!(
                    "coincident pair ({i}, {i}) is a self-pair"
                )));
            }
            let product = active[a] * active[b];
            if product == 0.0 {
                continue;
            }
            let current = self.raw_get(a, b);
            let next = if current == 0.0 {
                product
            } else {
                self.plasticity.deinforce(current)
            };
            if next != current {
                self.raw_set(a, b, next);
            }
        }
        Ok(())
    }

    fn check_wiring_target(&self, target: NodeId) -> Result<usize> {
        let idx = self.check_node(target)?;
        if self.is_auxiliary(target) {
            return Err(CglError::AuxiliaryNode(target));
        }
        Ok(idx)
    }

    fn push_auxiliary(&mut self, kind: AuxiliaryKind) -> NodeId {
        let new_size = self.size + 1;
        let use_dense = match self.representation {
            Representation::Auto => new_size <= DENSE_LIMIT,
            Representation::Dense => true,
            Representation::Sparse => false,
        };
        let storage = std::mem::replace(&mut self.storage, Storage::Sparse(Vec::new()));
        self.storage = match (storage, use_dense) {
            (Storage::Dense(old), true) => {
                let mut data = vec![0.0; new_size * new_size];
                for i in 0..self.size {
                    data[i * new_size..i * new_size + self.size]
                        .copy_from_slice(&old[i * self.size..(i + 1) * self.size]);
                }
                Storage::Dense(data)
            }
            (Storage::Sparse(mut rows), false) => {
                rows.push(BTreeMap::new());
                Storage::Sparse(rows)
            }
            (Storage::Dense(old), false) => {
                let mut rows = vec![BTreeMap::new(); new_size];
                for i in 0..self.size {
                    for j in 0..self.size {
                        let c = old[i * self.size + j];
                        if c != 0.0 {
                            rows[i].insert(j, c);
                        }
                    }
                }
                Storage::Sparse(rows)
            }
            (Storage::Sparse(rows), true) => {
                let mut data = vec![0.0; new_size * new_size];
                for (i, row) in rows.iter().enumerate() {
                    for (&j, &c) in row {
                        data[i * new_size + j] = c;
                    }
                }
                Storage::Dense(data)
            }
        };
        self.size = new_size;
        self.auxiliaries.push(Auxiliary { id: new_size, kind });
        new_size
    }

    /// Appends a reward node joined to `target` with conductance `weight > 1`.
    /// Returns the new node's id.
    pub fn wire_reward(&mut self, target: NodeId, weight: f64) -> Result<NodeId> {
        let t = self.check_wiring_target(target)?;
        if !(weight.is_finite() && weight > 1.0) {
            return Err(CglError::InvalidParameter(format!(
                "reward weight must be > 1, got {weight}"
            )));
        }
        let id = self.push_auxiliary(AuxiliaryKind::Reward);
        self.raw_set(t, id - 1, weight);
        Ok(id)
    }

    /// Appends `edge_count` penalty nodes, each joined to `target` with
    /// conductance `weight` in (0, 1). Each penalty edge gets its own node
    /// since the matrix has no parallel edges.
    pub fn wire_penalty(&mut self, target: NodeId, edge_count: usize, weight: f64) -> Result<Vec<NodeId>> {
        let t = self.check_wiring_target(target)?;
        if !(weight > 0.0 && weight < 1.0) {
            return Err(CglError::InvalidParameter(format!(
                "penalty weight must lie in (0, 1), got {weight}"
            )));
        }
        if edge_count == 0 {
            return Err(CglError::InvalidParameter("penalty edge count must be >= 1".into()));
        }
        let mut ids = Vec::with_capacity(edge_count);
        for _ in 0..edge_count {
            let id = self.push_auxiliary(AuxiliaryKind::Penalty);
            self.raw_set(t, id - 1, weight);
            ids.push(id);
        }
        Ok(ids)
    }

    pub fn to_snapshot(&self) -> MatrixSnapshot {
        MatrixSnapshot {
            version: SNAPSHOT_VERSION,
            m: self.size,
            sensory_count: self.sensory_count,
            plasticity: Some(self.plasticity),
            normalization: self.normalization,
            auxiliaries: self.auxiliaries.clone(),
            entries: self.entries(),
        }
    }

    pub fn from_snapshot(snapshot: &MatrixSnapshot) -> Result<Self> {
        if snapshot.version != SNAPSHOT_VERSION {
            return Err(CglError::Validation(format!(
                "unsupported snapshot version {}",
                snapshot.version
            )));
        }
        let mut c = Self::new(snapshot.sensory_count, snapshot.plasticity.unwrap_or_default())?;
        c.normalization = snapshot.normalization;
        let aux_count = snapshot.m.checked_sub(snapshot.sensory_count).ok_or_else(|| {
            CglError::Validation(format!(
                "m = {} is smaller than sensory_count = {}",
                snapshot.m, snapshot.sensory_count
            ))
        })?;
        if aux_count != snapshot.auxiliaries.len() {
            return Err(CglError::Validation(format!(
                "{} auxiliary nodes implied by m, {} listed",
                aux_count,
                snapshot.auxiliaries.len()
            )));
        }
        for (k, aux) in snapshot.auxiliaries.iter().enumerate() {
            if aux.id != snapshot.sensory_count + k + 1 {
                return Err(CglError::Validation(format!(
                    "auxiliary ids must be consecutive after the sensory block; found {}",
                    aux.id
                )));
            }
            c.push_auxiliary(aux.kind);
        }
        for &(i, j, value) in &snapshot.entries {
            if i >= j {
                return Err(CglError::Validation(format!("entry ({i}, {j}) must have i < j")));
            }
            c.set_conductance(i, j, value)?;
        }
        Ok(c)
    }

    pub fn to_json(&self) -> String {
        let mut text = serde_json::to_string_pretty(&self.to_snapshot()).expect("snapshot serializes");
        text.push('\n');
        text
    }

    pub fn from_json(text: &str) -> Result<Self> {
        Self::from_snapshot(&serde_json::from_str(text)?)
    }

    /// Copy with the given storage, for cross-checking representations.
    pub fn converted(&self, representation: Representation) -> Self {
        let mut c =
            Self::with_representation(self.sensory_count, self.plasticity, representation).expect("already validated");
        c.normalization = self.normalization;
        for aux in &self.auxiliaries {
            c.push_auxiliary(aux.kind);
        }
        for (i, j, v) in self.entries() {
            c.raw_set(i - 1, j - 1, v);
        }
        c
    }
}

fn empty_storage(size: usize, representation: Representation) -> Storage {
    let dense = match representation {
        Representation::Auto => size <= DENSE_LIMIT,
        Representation::Dense => true,
        Representation::Sparse => false,
    };
    if dense {
        Storage::Dense(vec![0.0; size * size])
    } else {
        Storage::Sparse(vec![BTreeMap::new(); size])
    }
}

pub const SNAPSHOT_VERSION: u32 = 1;

/// Serialized form of a [`CoincidentMatrix`]. Each undirected edge appears
/// once in `entries` as `[i, j, value]` with `i < j`. Values are written in
/// shortest round-trip form, so parsing recovers the exact `f64`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MatrixSnapshot {
    pub version: u32,
    pub m: usize,
    pub sensory_count: usize,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub plasticity: Option<Plasticity>,
    #[serde(default)]
    pub normalization: Normalization,
    pub auxiliaries: Vec<Auxiliary>,
    pub entries: Vec<(NodeId, NodeId, f64)>,
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{generate_lattice, generate_path};

    fn path3() -> CoincidentMatrix {
        CoincidentMatrix::from_environment(&generate_path(3).unwrap(), Plasticity::default()).unwrap()
    }

    #[test]
    fn degrees_of_path3() {
        assert_eq!(path3().weighted_degrees(), vec![1.0, 2.0, 1.0]);
        let mut c = path3();
        c.set_conductance(1, 2, 3.0).unwrap();
        assert_eq!(c.weighted_degrees(), vec![3.0, 4.0, 1.0]);
        let lone = CoincidentMatrix::new(1, Plasticity::default()).unwrap();
        assert_eq!(lone.weighted_degrees(), vec![0.0]);
    }

    #[test]
    fn first_coincidence_creates_unit_edge() {
        let mut c = CoincidentMatrix::new(8, Plasticity::default()).unwrap();
        let x = StateVector::indicator_set(8, &[5, 6]).unwrap();
        c.apply_coincidence(&x, &[(5, 6)]).unwrap();
        assert_eq!(c.get(5, 6), 1.0);
        assert_eq!(c.get(6, 5), 1.0);
    }

    #[test]
    fn deinforcement_down_to_floor() {
        let mut c = CoincidentMatrix::new(8, Plasticity::default()).unwrap();
        let x = StateVector::indicator_set(8, &[5, 6]).unwrap();
        let mut seen = Vec::new();
        for _ in 0..7 {
            c.apply_coincidence(&x, &[(5, 6)]).unwrap();
            seen.push(c.get(5, 6));
        }
        assert_eq!(seen, vec![1.0, 0.5, 0.25, 0.125, 0.0625, 0.05, 0.05]);
    }

    #[test]
    fn clamp_versus_literal_floor() {
        let clamp = Plasticity {
            deinforcement: 0.5,
            floor: 0.3,
            floor_mode: FloorMode::Clamp,
        };
        let literal = Plasticity {
            floor_mode: FloorMode::Literal,
            ..clamp
        };
        assert_eq!(clamp.deinforce(0.5), 0.3);
        assert_eq!(literal.deinforce(0.5), 0.25);
        assert_eq!(literal.deinforce(0.25), 0.25);
        assert_eq!(clamp.deinforce(0.3), 0.3);
    }

    #[test]
    fn inactive_pair_is_untouched() {
        let mut c = path3();
        let x = StateVector::indicator(3, 1).unwrap();
        c.apply_coincidence(&x, &[(2, 3)]).unwrap();
        assert_eq!(c.get(2, 3), 1.0);
        assert!(c.apply_coincidence(&x, &[(2, 4)]).is_err());
    }

    #[test]
    fn reward_wiring() {
        let mut c = CoincidentMatrix::from_environment(&generate_path(25).unwrap(), Plasticity::default()).unwrap();
        let id = c.wire_reward(16, 3.0).unwrap();
        assert_eq!((id, c.size()), (26, 26));
        assert_eq!(c.get(16, 26), 3.0);
        assert_eq!(c.get(26, 16), 3.0);
        assert!(c.is_auxiliary(26));
        assert!(c.wire_reward(26, 3.0).is_err());
        assert!(c.wire_reward(16, 1.0).is_err());
        assert!(c.wire_reward(99, 3.0).is_err());
    }

    #[test]
    fn two_rewards_on_100_nodes() {
        let env = generate_lattice(10, 10).unwrap();
        let mut c = CoincidentMatrix::new(env.node_count(), Plasticity::default()).unwrap();
        c.wire_reward(44, 3.0).unwrap();
        c.wire_reward(57, 3.0).unwrap();
        assert_eq!(c.size(), 102);
        assert_eq!(c.get(44, 101), 3.0);
        assert_eq!(c.get(57, 102), 3.0);
    }

    #[test]
    fn penalty_wiring() {
        let env = generate_lattice(8, 8).unwrap();
        let mut c = CoincidentMatrix::from_environment(&env, Plasticity::default()).unwrap();
        let ids = c.wire_penalty(21, 1, 0.5).unwrap();
        assert_eq!(ids, vec![65]);
        assert_eq!(c.get(21, 65), 0.5);

        let before = c.weighted_degrees()[20];
        c.wire_penalty(21, 3, 0.5).unwrap();
        assert!((c.weighted_degrees()[20] - before - 1.5).abs() < 1e-15);
        assert!(c.wire_penalty(21, 1, 1.0).is_err());
        assert!(c.wire_penalty(21, 0, 0.5).is_err());
    }

    #[test]
    fn storage_switches_at_limit() {
        let mut c = CoincidentMatrix::new(DENSE_LIMIT, Plasticity::default()).unwrap();
        c.set_conductance(1, 2, 1.0).unwrap();
        assert!(c.is_dense());
        c.wire_reward(1, 2.0).unwrap();
        assert!(!c.is_dense());
        assert_eq!(c.get(1, 2), 1.0);
        assert_eq!(c.get(1, DENSE_LIMIT + 1), 2.0);
    }

    #[test]
    fn snapshot_round_trip() {
        let env = generate_lattice(4, 4).unwrap();
        let mut c = CoincidentMatrix::from_environment(&env, Plasticity::default()).unwrap();
        c.set_conductance(1, 2, 0.1 + 0.2).unwrap();
        c.set_conductance(6, 7, 1.0 / 3.0).unwrap();
        c.wire_reward(16, 3.0).unwrap();
        c.wire_penalty(6, 2, 0.5).unwrap();
        let back = CoincidentMatrix::from_json(&c.to_json()).unwrap();
        assert_eq!(back, c);
        assert_eq!(back.get(1, 2).to_bits(), (0.1f64 + 0.2).to_bits());
    }

    #[test]
    fn snapshot_rejects_inconsistent_sizes() {
        let mut snap = path3().to_snapshot();
        snap.m = 5;
        assert!(CoincidentMatrix::from_snapshot(&snap).is_err());
    }
}
