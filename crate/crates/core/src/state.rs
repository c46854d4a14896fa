use std::ops::Index;

use serde::{Deserialize, Serialize};

use crate::error::{CglError, Result};
use crate::graph::NodeId;

/// Nonnegative node activations, one entry per coincident-matrix node.
///
/// Indexing with `[i]` is 0-based; [`StateVector::value`] takes a 1-based node id.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct StateVector(Vec<f64>);

impl StateVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some((i, v)) = values.iter().enumerate().find(|(_, v)| !v.is_finite() || **v < 0.0) {
            return Err(CglError::InvalidParameter(format!(
                "state entry for node {} is {v}; activations must be finite and >= 0",
                i + 1
            )));
        }
        Ok(Self(values))
    }

    pub(crate) fn from_raw(values: Vec<f64>) -> Self {
        debug_assert!(values.iter().all(|v| *v >= 0.0));
        Self(values)
    }

    pub fn zeros(len: usize) -> Self {
        Self(vec![0.0; len])
    }

    /// Unit input at a single node.
    pub fn indicator(len: usize, node: NodeId) -> Result<Self> {
        Self::indicator_set(len, &[node])
    }

    /// Unit input at every listed node.
    pub fn indicator_set(len: usize, nodes: &[NodeId]) -> Result<Self> {
        let mut values = vec![0.0; len];
        for &node in nodes {
            if node == 0 || node > len {
                return Err(CglError::NodeOutOfRange { node, max: len });
            }
            values[node - 1] = 1.0;
        }
        Ok(Self(values))
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    /// Value at a 1-based node id.
    pub fn value(&self, node: NodeId) -> f64 {
        self.0[node - 1]
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub(crate) fn check_len(&self, expected: usize) -> Result<()> {
        if self.0.len() == expected {
            Ok(())
        } else {
            Err(CglError::DimensionMismatch {
                expected,
                actual: self.0.len(),
            })
        }
    }
}

impl Index<usize> for StateVector {
    type Output = f64;

    fn index(&self, index: usize) -> &f64 {
        &self.0[index]
    }
}

impl AsRef<[f64]> for StateVector {
    fn as_ref(&self) -> &[f64] {
        &self.0
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rejects_negative_and_nan() {
        assert!(StateVector::new(vec![0.0, -1e-3]).is_err());
        assert!(StateVector::new(vec![f64::NAN]).is_err());
        assert!(StateVector::new(vec![0.0, 2.0]).is_ok());
    }

    #[test]
    fn indicator_is_one_based() {
        let x = StateVector::indicator(3, 1).unwrap();
        assert_eq!(x.as_slice(), &[1.0, 0.0, 0.0]);
        assert!(StateVector::indicator(3, 0).is_err());
        assert!(StateVector::indicator(3, 4).is_err());
    }
}
