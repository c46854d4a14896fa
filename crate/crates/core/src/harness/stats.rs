//! Aggregate statistics over navigation runs.
//!
//! Conventions: the median is the lower median (for an even count, the
//! smaller of the two middle values); quartiles use the inclusive method
//! (linear interpolation at position `p * (n - 1)` of the sorted data).

use serde::{Deserialize, Serialize};

use crate::agent::RunResult;
use crate::error::{CglError, Result};

pub const MEDIAN_CONVENTION: &str = "lower";
pub const QUARTILE_METHOD: &str = "inclusive";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BoxPlot {
    pub min: f64,
    pub q1: f64,
    pub median: f64,
    pub q3: f64,
    pub max: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TrialStats {
    pub runs: usize,
    pub successes: usize,
    /// Percentage, `100 * successes / runs`.
    pub success_rate: f64,
    /// Over successful runs only; `None` when nothing succeeded.
    pub median_path: Option<usize>,
    pub mean_path: Option<f64>,
    /// `(path_length, count)` for every unit-width bin from min to max.
    pub histogram: Vec<(usize, usize)>,
    pub box_plot: Option<BoxPlot>,
    pub median_convention: String,
    pub quartile_method: String,
}

pub fn summarize(results: &[RunResult]) -> Result<TrialStats> {
    let outcomes: Vec<Option<usize>> = results
        .iter()
        .map(|r| if r.succeeded() { r.path_length } else { None })
        .collect();
    summarize_lengths(&outcomes)
}

/// Same as [`summarize`], from per-run outcomes: `Some(path_length)` for a
/// success, `None` for a failure.
pub fn summarize_lengths(outcomes: &[Option<usize>]) -> Result<TrialStats> {
    if outcomes.is_empty() {
        return Err(CglError::InvalidParameter("cannot summarize zero runs".into()));
    }
    let mut lengths: Vec<usize> = outcomes.iter().flatten().copied().collect();
    lengths.sort_unstable();
    let runs = outcomes.len();
    let successes = lengths.len();

    let (median_path, mean_path, histogram, box_plot) = if lengths.is_empty() {
        (None, None, Vec::new(), None)
    } else {
        let median = lengths[(successes - 1) / 2];
        let mean = lengths.iter().sum::<usize>() as f64 / successes as f64;
        let lo = lengths[0];
        let hi = lengths[successes - 1];
        let mut counts = vec![0usize; hi - lo + 1];
        for &l in &lengths {
            counts[l - lo] += 1;
        }
        let histogram = counts.into_iter().enumerate().map(|(k, c)| (lo + k, c)).collect();
        let sorted: Vec<f64> = lengths.iter().map(|&l| l as f64).collect();
        let box_plot = BoxPlot {
            min: sorted[0],
            q1: quantile_inclusive(&sorted, 0.25),
            median: quantile_inclusive(&sorted, 0.5),
            q3: quantile_inclusive(&sorted, 0.75),
            max: sorted[successes - 1],
        };
        (Some(median), Some(mean), histogram, Some(box_plot))
    };

    Ok(TrialStats {
        runs,
        successes,
        success_rate: 100.0 * successes as f64 / runs as f64,
        median_path,
        mean_path,
        histogram,
        box_plot,
        median_convention: MEDIAN_CONVENTION.into(),
        quartile_method: QUARTILE_METHOD.into(),
    })
}

fn quantile_inclusive(sorted: &[f64], p: f64) -> f64 {
    let pos = p * (sorted.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    sorted[lo] + (pos - lo as f64) * (sorted[hi] - sorted[lo])
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn three_successes() {
        let s = summarize_lengths(&[Some(3), Some(5), Some(7)]).unwrap();
        assert_eq!(s.success_rate, 100.0);
        assert_eq!(s.median_path, Some(5));
        assert_eq!(s.mean_path, Some(5.0));
        assert_eq!(s.histogram, vec![(3, 1), (4, 0), (5, 1), (6, 0), (7, 1)]);
    }

    #[test]
    fn partial_success() {
        let s = summarize_lengths(&[Some(2), None, Some(4), Some(9)]).unwrap();
        assert_eq!(s.success_rate, 75.0);
        assert_eq!(s.successes, 3);
        assert_eq!(s.median_path, Some(4));
    }

    #[test]
    fn lower_median_and_quartiles() {
        let s = summarize_lengths(&[Some(1), Some(2), Some(3), Some(4)]).unwrap();
        assert_eq!(s.median_path, Some(2));
        let b = s.box_plot.unwrap();
        assert_eq!((b.q1, b.median, b.q3), (1.75, 2.5, 3.25));
    }

    #[test]
    fn empty_and_all_failed() {
        assert!(summarize_lengths(&[]).is_err());
        let s = summarize_lengths(&[None, None]).unwrap();
        assert_eq!(s.success_rate, 0.0);
        assert!(s.median_path.is_none() && s.box_plot.is_none());
    }
}
