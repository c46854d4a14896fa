//! Reference propagation for cross-checking [`crate::dynamics::recurse`].
//!
//! Builds the transition matrix explicitly from matrix entries and
//! multiplies full dense row-vector products. Nothing here touches the
//! propagation code it is meant to check.

use crate::error::{CglError, Result};
use crate::matrix::{CoincidentMatrix, Normalization};
use crate::state::StateVector;

/// Dense `P = (D^-1 C + I) / 2`, with `P_ii = 1` on zero-degree rows. `D`
/// follows the matrix's normalization.
pub fn transition_matrix(c: &CoincidentMatrix) -> Vec<Vec<f64>> {
    let m = c.size();
    let mut p = vec![vec![0.0; m]; m];
    for (i, row) in p.iter_mut().enumerate() {
        let weights: Vec<f64> = (1..=m).map(|j| c.get(i + 1, j)).collect();
        let degree: f64 = match c.normalization() {
            Normalization::Weighted => weights.iter().sum(),
            Normalization::Count => weights.iter().filter(|w| **w != 0.0).count() as f64,
        };
        if degree == 0.0 {
            row[i] = 1.0;
            continue;
        }
        for (j, w) in weights.iter().enumerate() {
            row[j] = 0.5 * w / degree;
        }
        row[i] += 0.5;
    }
    p
}

/// `x * P^r` by repeated dense vector-matrix products.
pub fn oracle_walk(c: &CoincidentMatrix, x: &StateVector, recursions: usize) -> Result<StateVector> {
    let m = c.size();
    if x.len() != m {
        return Err(CglError::DimensionMismatch {
            expected: m,
            actual: x.len(),
        });
    }
    let p = transition_matrix(c);
    let mut v = x.as_slice().to_vec();
    for _ in 0..recursions {
        let mut next = vec![0.0; m];
        for (j, out) in next.iter_mut().enumerate() {
            *out = (0..m).map(|i| v[i] * p[i][j]).sum();
        }
        v = next;
    }
    StateVector::new(v)
}

/// Largest absolute difference between two vectors of equal length.
pub fn max_abs_diff(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).abs()).fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate_path;
    use crate::matrix::Plasticity;

    #[test]
    fn worked_example() {
        let c = CoincidentMatrix::from_environment(&generate_path(3).unwrap(), Plasticity::default()).unwrap();
        let x = StateVector::indicator(3, 1).unwrap();
        let out = oracle_walk(&c, &x, 2).unwrap();
        assert!(max_abs_diff(out.as_slice(), &[0.375, 0.5, 0.125]) < 1e-15);
        assert_eq!(oracle_walk(&c, &x, 0).unwrap(), x);
        assert!(oracle_walk(&c, &StateVector::zeros(2), 1).is_err());
    }

    #[test]
    fn rows_are_stochastic() {
        let mut c = CoincidentMatrix::new(4, Plasticity::default()).unwrap();
        c.set_conductance(1, 2, 0.5).unwrap();
        c.set_conductance(2, 3, 3.0).unwrap();
        for row in transition_matrix(&c) {
            assert!((row.iter().sum::<f64>() - 1.0).abs() < 1e-15);
        }
    }

    #[test]
    fn count_rows_scale_with_conductance() {
        let mut c = CoincidentMatrix::new(3, Plasticity::default()).unwrap();
        c.set_conductance(1, 2, 3.0).unwrap();
        c.set_conductance(1, 3, 1.0).unwrap();
        c.set_normalization(Normalization::Count);
        let p = transition_matrix(&c);
        assert_eq!(p[0], vec![0.5, 0.75, 0.25]);
        assert_eq!(p[1], vec![1.5, 0.5, 0.0]);
    }
}
