use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::distance::{euclidean, DistanceSpec, NeighborIndex};
use crate::error::{EvalError, Result};
use crate::matrix::Matrix;

/// Per-sample distance to the `rank`-th nearest other sample (rank 1 = nearest).
pub fn inter_sample_distance(x: &Matrix, rank: usize, spec: &DistanceSpec) -> Result<Vec<f64>> {
    if rank == 0 {
        return Err(EvalError::invalid("neighbor rank starts at 1"));
    }
    if x.nrows() <= rank {
        return Err(EvalError::invalid(format!(
            "neighbor rank {rank} needs more than {} samples",
            x.nrows()
        )));
    }
    let index = NeighborIndex::new(x, *spec, x.nrows())?;
    Ok((0..x.nrows())
        .into_par_iter()
        .map(|i| index.knn(x.row(i), rank, Some(i))[rank - 1].distance)
        .collect())
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Center {
    #[default]
    Centroid,
    GeometricMedian,
}

#[derive(Debug, Clone, PartialEq)]
pub struct CenterDistances {
    pub center: Vec<f64>,
    pub per_point: Vec<f64>,
    pub mean: f64,
    pub max: f64,
}

pub const WEISZFELD_TOL: f64 = 1e-9;
pub const WEISZFELD_MAX_ITER: usize = 1000;

/// Euclidean distance of every sample to the centroid or geometric median.
pub fn distance_to_centroid(x: &Matrix, center: Center) -> Result<CenterDistances> {
    if x.is_empty() {
        return Err(EvalError::Empty("generated set"));
    }
    let c = match center {
        Center::Centroid => x.mean_row(),
        Center::GeometricMedian => geometric_median(x)?,
    };
    let per_point: Vec<f64> = x.rows().map(|r| euclidean(r, &c)).collect();
    let mean = per_point.iter().sum::<f64>() / per_point.len() as f64;
    let max = per_point.iter().copied().fold(0.0, f64::max);
    Ok(CenterDistances {
        center: c,
        per_point,
        mean,
        max,
    })
}

/// Weiszfeld iteration with the Vardi–Zhang step for iterates that land on
/// input points.
pub fn geometric_median(x: &Matrix) -> Result<Vec<f64>> {
    let d = x.ncols();
    let mut y = x.mean_row();
    let scale = 1.0 + y.iter().map(|v| v.abs()).fold(0.0, f64::max);
    let mut residual = f64::INFINITY;
    for _ in 0..WEISZFELD_MAX_ITER {
        let mut num = vec![0.0; d];
        let mut denom = 0.0;
        let mut coincident = 0usize;
        // Resultant of unit vectors towards the non-coincident points.
        let mut pull = vec![0.0; d];
        for r in x.rows() {
            let dist = euclidean(r, &y);
            if dist <= 1e-15 * scale {
                coincident += 1;
                continue;
            }
            let w = 1.0 / dist;
            denom += w;
            for j in 0..d {
                num[j] += w * r[j];
                pull[j] += w * (r[j] - y[j]);
            }
        }
        if denom == 0.0 {
            // all points coincide with y
            return Ok(y);
        }
        let t: Vec<f64> = num.iter().map(|v| v / denom).collect();
        let next: Vec<f64> = if coincident == 0 {
            t
        } else {
            let r = pull.iter().map(|v| v * v).sum::<f64>().sqrt();
            let eta = coincident as f64;
            if r <= eta {
                // y is the median: the pull of the others cannot move it
                return Ok(y);
            }
            let a = (1.0 - eta / r).max(0.0);
            let b = (eta / r).min(1.0);
            t.iter().zip(&y).map(|(ti, yi)| a * ti + b * yi).collect()
        };
        residual = euclidean(&next, &y);
        y = next;
        if residual <= WEISZFELD_TOL * scale {
            return Ok(y);
        }
    }
    Err(EvalError::NonConvergence {
        method: "geometric median",
        iterations: WEISZFELD_MAX_ITER,
        residual,
    })
}
