use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use statrs::function::gamma::{digamma, ln_gamma};

use crate::distance::{DistanceSpec, NeighborIndex};
use crate::error::{EvalError, Result};
use crate::matrix::Matrix;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "mode", rename_all = "snake_case")]
pub enum EntropyMode {
    /// Joint histogram with `bins` equal-width bins per dimension.
    Histogram { bins: usize },
    /// Kozachenko–Leonenko estimator on the `k`-th nearest neighbor.
    Knn { k: usize },
}

impl Default for EntropyMode {
    fn default() -> Self {
        EntropyMode::Knn { k: 3 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EntropyResult {
    /// Nats.
    pub value: f64,
    pub warning: Option<String>,
}

/// Shannon entropy (nats) of a histogram given as nonnegative counts.
pub fn discrete_entropy(counts: &[f64]) -> f64 {
    let total: f64 = counts.iter().sum();
    if total <= 0.0 {
        return 0.0;
    }
    -counts
        .iter()
        .filter(|c| **c > 0.0)
        .map(|c| {
            let p = c / total;
            p * p.ln()
        })
        .sum::<f64>()
}

/// Log volume of the unit ball in `d` dimensions.
pub(crate) fn ln_unit_ball_volume(d: usize) -> f64 {
    let h = d as f64 / 2.0;
    h * std::f64::consts::PI.ln() - ln_gamma(h + 1.0)
}

pub fn entropy(x: &Matrix, mode: EntropyMode) -> Result<EntropyResult> {
    if x.is_empty() {
        return Err(EvalError::Empty("entropy input"));
    }
    match mode {
        EntropyMode::Histogram { bins } => histogram_entropy(x, bins),
        EntropyMode::Knn { k } => knn_entropy(x, k),
    }
}

fn histogram_entropy(x: &Matrix, bins: usize) -> Result<EntropyResult> {
    if bins == 0 {
        return Err(EvalError::invalid("histogram needs at least one bin"));
    }
    let d = x.ncols();
    let lo: Vec<f64> = (0..d)
        .map(|j| x.column(j).into_iter().fold(f64::INFINITY, f64::min))
        .collect();
    let hi: Vec<f64> = (0..d)
        .map(|j| x.column(j).into_iter().fold(f64::NEG_INFINITY, f64::max))
        .collect();
    let mut cells: BTreeMap<Vec<usize>, f64> = BTreeMap::new();
    for r in x.rows() {
        let key: Vec<usize> = r
            .iter()
            .enumerate()
            .map(|(j, v)| {
                let w = hi[j] - lo[j];
                if w <= 0.0 {
                    0
                } else {
                    (((v - lo[j]) / w * bins as f64) as usize).min(bins - 1)
                }
            })
            .collect();
        *cells.entry(key).or_insert(0.0) += 1.0;
    }
    let counts: Vec<f64> = cells.into_values().collect();
    let warning = (counts.len() == 1).then(|| "all samples fall in a single bin".to_string());
    Ok(EntropyResult {
        value: discrete_entropy(&counts),
        warning,
    })
}

fn knn_entropy(x: &Matrix, k: usize) -> Result<EntropyResult> {
    let n = x.nrows();
    if k == 0 || k >= n {
        return Err(EvalError::invalid(format!("k={k} must satisfy 1 ≤ k < n={n}")));
    }
    let d = x.ncols() as f64;
    let index = NeighborIndex::new(x, DistanceSpec::Euclidean, n)?;
    let eps: Vec<f64> = (0..n)
        .into_par_iter()
        .map(|i| index.knn(x.row(i), k, Some(i))[k - 1].distance)
        .collect();
    if let Some(i) = eps.iter().position(|e| *e <= 0.0) {
        return Err(EvalError::invalid(format!(
            "sample {i} has {k} coincident neighbors; the continuous estimator is undefined"
        )));
    }
    let mean_log = eps.iter().map(|e| e.ln()).sum::<f64>() / n as f64;
    let value = digamma(n as f64) - digamma(k as f64) + ln_unit_ball_volume(x.ncols()) + d * mean_log;
    Ok(EntropyResult {
        value,
        warning: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_and_point_mass() {
        assert!((discrete_entropy(&[5.0, 5.0, 5.0, 5.0]) - 4f64.ln()).abs() < 1e-12);
        assert_eq!(discrete_entropy(&[7.0, 0.0, 0.0]), 0.0);
    }

    #[test]
    fn uniform_maximizes() {
        let uniform = discrete_entropy(&[1.0; 6]);
        assert!((uniform - 6f64.ln()).abs() < 1e-12);
        for skew in [[2.0, 1.0, 1.0, 1.0, 1.0, 0.0], [3.0, 1.0, 1.0, 1.0, 0.5, 0.5]] {
            assert!(discrete_entropy(&skew) < uniform);
        }
    }

    #[test]
    fn histogram_mode() {
        let x = Matrix::column_vector(&[0.0, 1.0, 2.0, 3.0]);
        let r = entropy(&x, EntropyMode::Histogram { bins: 4 }).unwrap();
        assert!((r.value - 4f64.ln()).abs() < 1e-12);
        let same = Matrix::column_vector(&[1.0, 1.0, 1.0]);
        let r = entropy(&same, EntropyMode::Histogram { bins: 4 }).unwrap();
        assert_eq!(r.value, 0.0);
        assert!(r.warning.is_some());
    }

    #[test]
    fn unit_ball_volumes() {
        assert!((ln_unit_ball_volume(1).exp() - 2.0).abs() < 1e-12);
        assert!((ln_unit_ball_volume(2).exp() - std::f64::consts::PI).abs() < 1e-12);
        assert!((ln_unit_ball_volume(3).exp() - 4.0 / 3.0 * std::f64::consts::PI).abs() < 1e-12);
    }

    #[test]
    fn knn_uniform_interval() {
        use rand::Rng;
        // Uniform on [0,1] has differential entropy 0.
        let mut rng = crate::seed::RunSeed(5).rng();
        let v: Vec<f64> = (0..5000).map(|_| rng.random::<f64>()).collect();
        let x = Matrix::column_vector(&v);
        let r = entropy(&x, EntropyMode::Knn { k: 3 }).unwrap();
        assert!(r.value.abs() < 0.05, "{}", r.value);
        assert!(entropy(&x, EntropyMode::Knn { k: 5000 }).is_err());
    }
}
