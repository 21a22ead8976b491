use rayon::prelude::*;

use crate::distance::{DistanceSpec, NeighborIndex};
use crate::error::{EvalError, Result};
use crate::matrix::Matrix;

/// Uniform-weight k-nearest-neighbor regression.
pub fn knn_regress(
    train_x: &Matrix,
    train_y: &Matrix,
    query: &Matrix,
    k: usize,
    spec: &DistanceSpec,
) -> Result<Matrix> {
    if train_y.nrows() != train_x.nrows() {
        return Err(EvalError::DimensionMismatch {
            context: "regression labels",
            expected: train_x.nrows(),
            found: train_y.nrows(),
        });
    }
    if k == 0 || k > train_x.nrows() {
        return Err(EvalError::invalid(format!(
            "K={k} must be in 1..={}",
            train_x.nrows()
        )));
    }
    query.ensure_cols(train_x.ncols(), "regression query")?;
    spec.validate(query)?;
    let index = NeighborIndex::new(train_x, *spec, query.nrows())?;
    let out = train_y.ncols();
    let rows: Vec<f64> = (0..query.nrows())
        .into_par_iter()
        .flat_map_iter(|i| {
            let mut pred = vec![0.0; out];
            for nb in index.knn(query.row(i), k, None) {
                for (p, y) in pred.iter_mut().zip(train_y.row(nb.index)) {
                    *p += y;
                }
            }
            pred.into_iter().map(move |p| p / k as f64)
        })
        .collect();
    Matrix::from_vec(query.nrows(), out, rows)
}

/// Coefficient of determination, averaged uniformly over output columns.
pub fn r2_score(truth: &Matrix, pred: &Matrix) -> Result<f64> {
    pred.ensure_cols(truth.ncols(), "r2 predictions")?;
    if truth.nrows() != pred.nrows() || truth.is_empty() {
        return Err(EvalError::DimensionMismatch {
            context: "r2 rows",
            expected: truth.nrows(),
            found: pred.nrows(),
        });
    }
    let mut total = 0.0;
    for j in 0..truth.ncols() {
        let y = truth.column(j);
        let mean = y.iter().sum::<f64>() / y.len() as f64;
        let ss_tot: f64 = y.iter().map(|v| (v - mean).powi(2)).sum();
        if ss_tot <= 0.0 {
            return Err(EvalError::ZeroVariance { output: j });
        }
        let ss_res: f64 = y
            .iter()
            .enumerate()
            .map(|(i, v)| (v - pred.get(i, j)).powi(2))
            .sum();
        total += 1.0 - ss_res / ss_tot;
    }
    Ok(total / truth.ncols() as f64)
}

/// Train a KNN regressor on generated data and score it (R²) on real data.
pub fn ml_efficacy(
    gen_x: &Matrix,
    gen_y: &Matrix,
    real_x: &Matrix,
    real_y: &Matrix,
    k: usize,
    spec: &DistanceSpec,
) -> Result<f64> {
    let pred = knn_regress(gen_x, gen_y, real_x, k, spec)?;
    r2_score(real_y, &pred)
}
