//! Compact environment descriptions: `path:N`, `lattice:RxC`, `ws:N,k,beta`,
//! `file:PATH`.

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{CglError, Result};
use crate::graph::{generate_lattice, generate_path, generate_watts_strogatz, EnvironmentGraph};
use crate::graph_io::load_graph;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "String", into = "String")]
pub enum EnvSpec {
    Path(usize),
    Lattice { rows: usize, cols: usize },
    WattsStrogatz { n: usize, k: usize, beta: f64 },
    File(PathBuf),
}

impl EnvSpec {
    /// Builds the graph. `seed` only matters for Watts-Strogatz.
    pub fn build(&self, seed: u64) -> Result<EnvironmentGraph> {
        match self {
            EnvSpec::Path(n) => generate_path(*n),
            EnvSpec::Lattice { rows, cols } => generate_lattice(*rows, *cols),
            EnvSpec::WattsStrogatz { n, k, beta } => generate_watts_strogatz(*n, *k, *beta, seed),
            EnvSpec::File(path) => load_graph(path),
        }
    }
}

impl FromStr for EnvSpec {
    type Err = CglError;

    fn from_str(s: &str) -> Result<Self> {
        let bad = |why: &str| CglError::InvalidParameter(format!("bad environment spec `{s}`: {why}"));
        let (kind, rest) = s.split_once(':').ok_or_else(|| bad("expected `kind:params`"))?;
        let num = |field: &str| -> Result<usize> {
            field
                .trim()
                .parse()
                .map_err(|_| bad(&format!("`{field}` is not an integer")))
        };
        match kind {
            "path" => Ok(EnvSpec::Path(num(rest)?)),
            "lattice" => {
                let (r, c) = rest
                    .split_once(['x', 'X'])
                    .ok_or_else(|| bad("expected `lattice:RxC`"))?;
                Ok(EnvSpec::Lattice {
                    rows: num(r)?,
                    cols: num(c)?,
                })
            }
            "ws" => {
                let parts: Vec<&str> = rest.split(',').collect();
                let [n, k, beta] = parts.as_slice() else {
                    return Err(bad("expected `ws:N,k,beta`"));
                };
                let beta: f64 = beta
                    .trim()
                    .parse()
                    .map_err(|_| bad(&format!("`{beta}` is not a number")))?;
                Ok(EnvSpec::WattsStrogatz {
                    n: num(n)?,
                    k: num(k)?,
                    beta,
                })
            }
            "file" if !rest.is_empty() => Ok(EnvSpec::File(PathBuf::from(rest))),
            _ => Err(bad("kind must be path, lattice, ws or file")),
        }
    }
}

impl TryFrom<String> for EnvSpec {
    type Error = CglError;

    fn try_from(value: String) -> Result<Self> {
        value.parse()
    }
}

impl From<EnvSpec> for String {
    fn from(spec: EnvSpec) -> String {
        spec.to_string()
    }
}

impl fmt::Display for EnvSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EnvSpec::Path(n) => write!(f, "path:{n}"),
            EnvSpec::Lattice { rows, cols } => write!(f, "lattice:{rows}x{cols}"),
            EnvSpec::WattsStrogatz { n, k, beta } => write!(f, "ws:{n},{k},{beta}"),
            EnvSpec::File(path) => write!(f, "file:{}", path.display()),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_display() {
        for text in ["path:25", "lattice:8x8", "ws:100,4,0.5", "file:g.txt"] {
            let spec: EnvSpec = text.parse().unwrap();
            assert_eq!(spec.to_string(), text);
        }
        assert_eq!(
            "ws:100,4,0".parse::<EnvSpec>().unwrap(),
            EnvSpec::WattsStrogatz {
                n: 100,
                k: 4,
                beta: 0.0
            }
        );
    }

    #[test]
    fn rejects_garbage() {
        for text in ["grid:3", "lattice:8", "ws:100,4", "path:x", "file:", "path"] {
            assert!(text.parse::<EnvSpec>().is_err(), "{text}");
        }
    }

    #[test]
    fn builds() {
        let g = "lattice:3x4".parse::<EnvSpec>().unwrap().build(0).unwrap();
        assert_eq!(g.node_count(), 12);
    }
}
