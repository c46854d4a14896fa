//! Signal propagation over the coincident matrix.
//!
//! One cell update is `x (D^-1 C + I) / 2` for a row vector `x`. With
//! [`Normalization::Weighted`] `D` holds row sums, the update is one step of a
//! lazy random walk, and total activation is conserved. With
//! [`Normalization::Count`] `D` holds edge counts and conductances away from 1
//! amplify or attenuate the signal. Either way a node with zero degree keeps
//! its whole value (`P_ii = 1`).

use crate::error::{CglError, Result};
use crate::matrix::CoincidentMatrix;
#[cfg(doc)]
use crate::matrix::Normalization;
use crate::state::StateVector;

/// `x * (D^-1 C + I) / 2`.
pub fn cell_update(x: &StateVector, c: &CoincidentMatrix) -> Result<StateVector> {
    x.check_len(c.size())?;
    let degrees = c.degrees();
    Ok(StateVector::from_raw(step(x.as_slice(), c, &degrees)))
}

fn step(x: &[f64], c: &CoincidentMatrix, degrees: &[f64]) -> Vec<f64> {
    let mut out = vec![0.0; x.len()];
    for (i, &xi) in x.iter().enumerate() {
        if xi == 0.0 {
            continue;
        }
        let deg = degrees[i];
        if deg == 0.0 {
            out[i] += xi;
            continue;
        }
        out[i] += 0.5 * xi;
        let share = 0.5 * xi / deg;
        c.for_each_in_row(i, |j, w| out[j] += share * w);
    }
    out
}

/// `r` cell updates of `x`, plus `latent` times one cell update of the
/// previous input. With `latent == 0` the previous input is ignored.
pub fn recurse(
    x: &StateVector,
    previous: &StateVector,
    c: &CoincidentMatrix,
    recursions: usize,
    latent: f64,
) -> Result<StateVector> {
    x.check_len(c.size())?;
    previous.check_len(c.size())?;
    if !(latent.is_finite() && latent >= 0.0) {
        return Err(CglError::InvalidParameter(format!(
            "latent weight must be >= 0, got {latent}"
        )));
    }
    let degrees = c.degrees();
    let mut current = x.as_slice().to_vec();
    for _ in 0..recursions {
        current = step(&current, c, &degrees);
    }
    if latent > 0.0 {
        let carried = step(previous.as_slice(), c, &degrees);
        for (v, p) in current.iter_mut().zip(carried) {
            *v += latent * p;
        }
    }
    Ok(StateVector::from_raw(current))
}

/// Regenerated part of an experience: `output - input`, entrywise. Can be
/// negative.
pub fn memory_vector(output: &StateVector, input: &StateVector) -> Result<Vec<f64>> {
    input.check_len(output.len())?;
    Ok(output
        .as_slice()
        .iter()
        .zip(input.as_slice())
        .map(|(o, i)| o - i)
        .collect())
}

/// Scales so the largest entry is 1. For display only.
pub fn normalize_display(x: &[f64]) -> Vec<f64> {
    let max = x.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    if max > 0.0 {
        x.iter().map(|v| v / max).collect()
    } else {
        x.to_vec()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::generate_path;
    use crate::matrix::Plasticity;

    fn path3() -> CoincidentMatrix {
        CoincidentMatrix::from_environment(&generate_path(3).unwrap(), Plasticity::default()).unwrap()
    }

    fn sv(v: &[f64]) -> StateVector {
        StateVector::new(v.to_vec()).unwrap()
    }

    #[test]
    fn worked_example_two_steps() {
        let c = path3();
        let once = cell_update(&sv(&[1.0, 0.0, 0.0]), &c).unwrap();
        assert_eq!(once.as_slice(), &[0.5, 0.5, 0.0]);
        let twice = cell_update(&once, &c).unwrap();
        assert_eq!(twice.as_slice(), &[0.375, 0.5, 0.125]);
    }

    #[test]
    fn zero_input_and_isolated_node() {
        let c = path3();
        assert_eq!(cell_update(&StateVector::zeros(3), &c).unwrap().as_slice(), &[0.0; 3]);
        let lone = CoincidentMatrix::new(1, Plasticity::default()).unwrap();
        assert_eq!(cell_update(&sv(&[1.0]), &lone).unwrap().as_slice(), &[1.0]);
    }

    #[test]
    fn dimension_mismatch() {
        assert!(matches!(
            cell_update(&sv(&[1.0, 0.0]), &path3()),
            Err(CglError::DimensionMismatch { expected: 3, actual: 2 })
        ));
    }

    #[test]
    fn recurse_composes_updates() {
        let c = path3();
        let x = sv(&[1.0, 0.0, 0.0]);
        let zeros = StateVector::zeros(3);
        assert_eq!(
            recurse(&x, &zeros, &c, 2, 0.0).unwrap().as_slice(),
            &[0.375, 0.5, 0.125]
        );
        assert_eq!(recurse(&x, &zeros, &c, 0, 0.0).unwrap(), x);
    }

    #[test]
    fn latent_term_adds_previous_update() {
        let c = path3();
        let x = sv(&[0.0, 0.0, 1.0]);
        let prev = sv(&[1.0, 0.0, 0.0]);
        let out = recurse(&x, &prev, &c, 0, 0.5).unwrap();
        // x + 0.5 * [0.5, 0.5, 0]
        assert_eq!(out.as_slice(), &[0.25, 0.25, 1.0]);
        assert!(recurse(&x, &prev, &c, 1, -1.0).is_err());
    }

    #[test]
    fn memory_of_worked_example() {
        let out = sv(&[0.375, 0.5, 0.125]);
        let input = sv(&[1.0, 0.0, 0.0]);
        assert_eq!(memory_vector(&out, &input).unwrap(), vec![-0.625, 0.5, 0.125]);
        assert_eq!(memory_vector(&input, &input).unwrap(), vec![0.0; 3]);
        assert!(memory_vector(&out, &sv(&[1.0])).is_err());
    }

    #[test]
    fn normalization() {
        assert_eq!(normalize_display(&[0.2, 0.4]), vec![0.5, 1.0]);
        assert_eq!(normalize_display(&[0.0, 0.0]), vec![0.0, 0.0]);
        assert!(normalize_display(&[]).is_empty());
    }
}
