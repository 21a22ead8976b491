use rand::Rng;
use serde::{Deserialize, Serialize};

use super::euclidean;
use crate::error::{EvalError, Result};
use crate::matrix::Matrix;
use crate::seed::RunSeed;

/// Maximum number of pairs used by the median heuristic.
pub const MEDIAN_PAIR_BUDGET: usize = 10_000;

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Bandwidth {
    Fixed(f64),
    /// Median Euclidean distance over the pooled rows of both sets.
    #[default]
    MedianHeuristic,
}

/// Median pairwise Euclidean distance over the pooled rows of `a` and `b`.
///
/// Uses every pair when there are at most [`MEDIAN_PAIR_BUDGET`] of them,
/// otherwise that many pairs drawn with `seed`.
pub fn median_heuristic(a: &Matrix, b: &Matrix, seed: RunSeed) -> Result<f64> {
    let pooled = a.vstack(b)?;
    let n = pooled.nrows();
    if n < 2 {
        return Err(EvalError::DegenerateBandwidth);
    }
    let total = n * (n - 1) / 2;
    let mut dists = Vec::with_capacity(total.min(MEDIAN_PAIR_BUDGET));
    if total <= MEDIAN_PAIR_BUDGET {
        for i in 0..n {
            for j in i + 1..n {
                dists.push(euclidean(pooled.row(i), pooled.row(j)));
            }
        }
    } else {
        let mut rng = seed.rng();
        while dists.len() < MEDIAN_PAIR_BUDGET {
            let i = rng.random_range(0..n);
            let j = rng.random_range(0..n);
            if i != j {
                dists.push(euclidean(pooled.row(i), pooled.row(j)));
            }
        }
    }
    dists.sort_by(f64::total_cmp);
    let k = dists.len();
    let median = if k % 2 == 1 {
        dists[k / 2]
    } else {
        0.5 * (dists[k / 2 - 1] + dists[k / 2])
    };
    if median <= 0.0 {
        return Err(EvalError::DegenerateBandwidth);
    }
    Ok(median)
}

pub fn resolve_bandwidth(bw: Bandwidth, a: &Matrix, b: &Matrix, seed: RunSeed) -> Result<f64> {
    match bw {
        Bandwidth::Fixed(s) if s > 0.0 && s.is_finite() => Ok(s),
        Bandwidth::Fixed(s) => Err(EvalError::invalid(format!("bandwidth must be > 0, got {s}"))),
        Bandwidth::MedianHeuristic => median_heuristic(a, b, seed),
    }
}

/// Gaussian kernel matrix `exp(-d² / (2σ²))` between rows of `a` and `b`.
/// Returns the matrix and the resolved σ.
pub fn rbf_kernel_matrix(
    a: &Matrix,
    b: &Matrix,
    bandwidth: Bandwidth,
    seed: RunSeed,
) -> Result<(Matrix, f64)> {
    b.ensure_cols(a.ncols(), "rbf kernel")?;
    let sigma = resolve_bandwidth(bandwidth, a, b, seed)?;
    Ok((rbf_with_sigma(a, b, sigma), sigma))
}

pub(crate) fn rbf_with_sigma(a: &Matrix, b: &Matrix, sigma: f64) -> Matrix {
    let gamma = 1.0 / (2.0 * sigma * sigma);
    let mut k = Matrix::zeros(a.nrows(), b.nrows());
    for i in 0..a.nrows() {
        for j in 0..b.nrows() {
            k.set(i, j, (-gamma * super::squared_euclidean(a.row(i), b.row(j))).exp());
        }
    }
    k
}
