//! Run manifests: enough to replay a command and check what it read and wrote.

use std::fs;
use std::path::{Path, PathBuf};
use std::time::{SystemTime, UNIX_EPOCH};

use cgl_core::agent::{PenaltySpec, RewardSpec};
use cgl_core::harness::{Scenario, TrialBatch};
use cgl_core::{AgentConfig, EnvSpec, NodeId};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::args::{DataFormat, GraphFormatArg};
use crate::error::{CliError, CliResult};

pub const TOOL: &str = "cgl";

/// A fully resolved command: defaults, config files and flags already merged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "snake_case")]
pub enum Invocation {
    Gen {
        env: EnvSpec,
        seed: u64,
        format: GraphFormatArg,
    },
    Train {
        env: EnvSpec,
        agent: AgentConfig,
        rewards: Vec<RewardSpec>,
        penalties: Vec<PenaltySpec>,
    },
    Run {
        env: EnvSpec,
        agent: AgentConfig,
        rewards: Vec<RewardSpec>,
        penalties: Vec<PenaltySpec>,
        start: NodeId,
        target: NodeId,
        format: DataFormat,
    },
    Trial {
        batch: TrialBatch,
        workers: usize,
        format: DataFormat,
    },
    Demo {
        scenario: Box<Scenario>,
        workers: usize,
        format: DataFormat,
    },
    Oracle {
        snapshot: PathBuf,
        recursions: usize,
        inputs: Vec<NodeId>,
        tolerance: f64,
    },
}

impl Invocation {
    pub fn seed(&self) -> u64 {
        match self {
            Invocation::Gen { seed, .. } => *seed,
            Invocation::Train { agent, .. } | Invocation::Run { agent, .. } => agent.seed,
            Invocation::Trial { batch, .. } => batch.seed,
            Invocation::Demo { scenario, .. } => scenario.seed,
            Invocation::Oracle { .. } => 0,
        }
    }

    pub fn set_workers(&mut self, n: usize) {
        if let Invocation::Trial { workers, .. } | Invocation::Demo { workers, .. } = self {
            *workers = n;
        }
    }
}

/// Where the outputs go. Not part of the invocation so replays can redirect.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct Destinations {
    pub out: Option<PathBuf>,
    pub heatmap: Option<PathBuf>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FileDigest {
    pub path: PathBuf,
    pub sha256: String,
}

impl FileDigest {
    pub fn of_bytes(path: &Path, bytes: &[u8]) -> Self {
        Self {
            path: path.to_path_buf(),
            sha256: hex::encode(Sha256::digest(bytes)),
        }
    }

    pub fn of_file(path: &Path) -> CliResult<Self> {
        let bytes = fs::read(path).map_err(|e| CliError::io(path, e))?;
        Ok(Self::of_bytes(path, &bytes))
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunManifest {
    pub tool: String,
    pub version: String,
    pub invocation: Invocation,
    pub destinations: Destinations,
    pub seed: u64,
    pub timestamp_unix: u64,
    pub inputs: Vec<FileDigest>,
    pub outputs: Vec<FileDigest>,
}

impl RunManifest {
    pub fn new(
        invocation: Invocation,
        destinations: Destinations,
        inputs: Vec<FileDigest>,
        outputs: Vec<FileDigest>,
    ) -> Self {
        let timestamp_unix = SystemTime::now()
            .duration_since(UNIX_EPOCH)
            .map(|d| d.as_secs())
            .unwrap_or(0);
        Self {
            tool: TOOL.to_string(),
            version: env!("CARGO_PKG_VERSION").to_string(),
            seed: invocation.seed(),
            invocation,
            destinations,
            timestamp_unix,
            inputs,
            outputs,
        }
    }

    /// `<file>.manifest.json` next to the given output.
    pub fn path_for(output: &Path) -> PathBuf {
        let mut name = output.as_os_str().to_owned();
        name.push(".manifest.json");
        PathBuf::from(name)
    }

    pub fn write(&self, path: &Path) -> CliResult<()> {
        let mut text = serde_json::to_string_pretty(self).expect("manifest serializes");
        text.push('\n');
        fs::write(path, text).map_err(|e| CliError::io(path, e))
    }

    pub fn read(path: &Path) -> CliResult<Self> {
        let text = fs::read_to_string(path).map_err(|e| CliError::io(path, e))?;
        let manifest: Self = serde_json::from_str(&text).map_err(|e| CliError::Manifest {
            path: path.to_path_buf(),
            message: e.to_string(),
        })?;
        if manifest.tool != TOOL {
            return Err(CliError::Manifest {
                path: path.to_path_buf(),
                message: format!("written by `{}`, not {TOOL}", manifest.tool),
            });
        }
        Ok(manifest)
    }

    /// Fails if any recorded input file has changed since the manifest was written.
    pub fn check_inputs(&self) -> CliResult<()> {
        for recorded in &self.inputs {
            let now = FileDigest::of_file(&recorded.path)?;
            if now.sha256 != recorded.sha256 {
                return Err(CliError::InputChanged(recorded.path.clone()));
            }
        }
        Ok(())
    }
}
