//! Determinantal point process diversity: mean log-determinant of a
//! powered Gaussian similarity kernel over random subsets.

use rand::seq::index::sample;
use serde::{Deserialize, Serialize};

use crate::distance::{median_heuristic, Bandwidth};
use crate::distance::rbf_with_sigma;
use crate::error::{EvalError, Result};
use crate::matrix::Matrix;
use crate::seed::RunSeed;

pub const DPP_JITTER: f64 = 1e-12;
/// A Cholesky pivot at or below this marks a numerically singular subset.
/// Exactly repeated points leave pivots between one and two jitters.
pub const COLLAPSE_PIVOT: f64 = 4.0 * DPP_JITTER;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DppSettings {
    pub subset_size: usize,
    /// Elementwise exponent applied to the kernel before the determinant.
    pub power: f64,
    pub runs: usize,
    pub bandwidth: Bandwidth,
}

impl Default for DppSettings {
    fn default() -> Self {
        DppSettings {
            subset_size: 10,
            power: 0.1,
            runs: 10,
            bandwidth: Bandwidth::MedianHeuristic,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct DppResult {
    /// Mean log-determinant; larger is more diverse.
    pub value: f64,
    pub per_run: Vec<f64>,
    pub sigma: f64,
}

/// log det(L + jitter·I) by Cholesky. Fails with `DuplicateCollapse` when a
/// pivot drops to [`COLLAPSE_PIVOT`] or below.
pub fn log_det_cholesky(l: &Matrix, jitter: f64) -> Result<f64> {
    let n = l.nrows();
    let mut c = Matrix::zeros(n, n);
    let mut log_det = 0.0;
    for j in 0..n {
        let mut diag = l.get(j, j) + jitter;
        for k in 0..j {
            diag -= c.get(j, k) * c.get(j, k);
        }
        if diag <= COLLAPSE_PIVOT || !diag.is_finite() {
            return Err(EvalError::DuplicateCollapse { index: j, pivot: diag });
        }
        let root = diag.sqrt();
        c.set(j, j, root);
        log_det += diag.ln();
        for i in j + 1..n {
            let mut s = l.get(i, j);
            for k in 0..j {
                s -= c.get(i, k) * c.get(j, k);
            }
            c.set(i, j, s / root);
        }
    }
    Ok(log_det)
}

/// Similarity matrix with entries `exp(-d²/(2σ²))^power`.
pub fn dpp_kernel(x: &Matrix, sigma: f64, power: f64) -> Matrix {
    rbf_with_sigma(x, x, sigma).map(|k| k.powf(power))
}

pub fn dpp_diversity(x: &Matrix, settings: DppSettings, seed: RunSeed) -> Result<DppResult> {
    let DppSettings {
        subset_size,
        power,
        runs,
        bandwidth,
    } = settings;
    if subset_size == 0 || subset_size > x.nrows() {
        return Err(EvalError::invalid(format!(
            "subset size {subset_size} must be in 1..={}",
            x.nrows()
        )));
    }
    if !(power > 0.0) || runs == 0 {
        return Err(EvalError::invalid("power must be > 0 and runs ≥ 1"));
    }
    let sigma = match bandwidth {
        Bandwidth::Fixed(s) if s > 0.0 => s,
        Bandwidth::Fixed(s) => return Err(EvalError::invalid(format!("bandwidth must be > 0, got {s}"))),
        Bandwidth::MedianHeuristic => {
            median_heuristic(x, &Matrix::zeros(0, x.ncols()), seed.derive(u64::MAX))?
        }
    };
    let per_run = (0..runs)
        .map(|run| {
            let mut idx = sample(&mut seed.derive(run as u64).rng(), x.nrows(), subset_size).into_vec();
            idx.sort_unstable();
            log_det_cholesky(&dpp_kernel(&x.select_rows(&idx), sigma, power), DPP_JITTER)
        })
        .collect::<Result<Vec<f64>>>()?;
    let value = per_run.iter().sum::<f64>() / runs as f64;
    Ok(DppResult {
        value,
        per_run,
        sigma,
    })
}
