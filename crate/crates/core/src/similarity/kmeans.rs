//! Seeded Lloyd k-means with k-means++ initialization.

use rand::Rng;

use crate::distance::squared_euclidean;
use crate::error::{EvalError, Result};
use crate::matrix::Matrix;
use crate::seed::RunSeed;

pub const KMEANS_MAX_ITER: usize = 100;
pub const KMEANS_TOL: f64 = 1e-6;

#[derive(Debug, Clone)]
pub struct KMeans {
    pub centroids: Matrix,
    pub labels: Vec<usize>,
    pub iterations: usize,
}

pub fn kmeans(data: &Matrix, k: usize, seed: RunSeed) -> Result<KMeans> {
    kmeans_with(data, k, KMEANS_MAX_ITER, KMEANS_TOL, seed)
}

pub fn kmeans_with(
    data: &Matrix,
    k: usize,
    max_iter: usize,
    tol: f64,
    seed: RunSeed,
) -> Result<KMeans> {
    let n = data.nrows();
    if k == 0 {
        return Err(EvalError::invalid("k-means needs at least one cluster"));
    }
    if k > n {
        return Err(EvalError::invalid(format!(
            "cannot form {k} clusters from {n} points"
        )));
    }
    let mut rng = seed.rng();
    let mut centroids = plus_plus_init(data, k, &mut rng);
    let mut labels = vec![0usize; n];
    let mut iterations = 0;
    for it in 0..max_iter {
        iterations = it + 1;
        assign(data, &centroids, &mut labels);
        let mut sums = Matrix::zeros(k, data.ncols());
        let mut counts = vec![0usize; k];
        for (i, &c) in labels.iter().enumerate() {
            counts[c] += 1;
            for (s, v) in sums.row_mut(c).iter_mut().zip(data.row(i)) {
                *s += v;
            }
        }
        let mut shift: f64 = 0.0;
        for c in 0..k {
            if counts[c] == 0 {
                // empty cluster keeps its previous centroid
                continue;
            }
            let inv = 1.0 / counts[c] as f64;
            let mut moved = 0.0;
            for j in 0..data.ncols() {
                let new = sums.get(c, j) * inv;
                moved += (new - centroids.get(c, j)).powi(2);
                centroids.set(c, j, new);
            }
            shift = shift.max(moved.sqrt());
        }
        if shift <= tol {
            break;
        }
    }
    assign(data, &centroids, &mut labels);
    Ok(KMeans {
        centroids,
        labels,
        iterations,
    })
}

fn plus_plus_init(data: &Matrix, k: usize, rng: &mut impl Rng) -> Matrix {
    let n = data.nrows();
    let mut chosen = Vec::with_capacity(k);
    chosen.push(rng.random_range(0..n));
    let mut d2: Vec<f64> = (0..n)
        .map(|i| squared_euclidean(data.row(i), data.row(chosen[0])))
        .collect();
    while chosen.len() < k {
        let total: f64 = d2.iter().sum();
        let next = if total > 0.0 {
            let target = rng.random::<f64>() * total;
            let mut acc = 0.0;
            let mut pick = n - 1;
            for (i, w) in d2.iter().enumerate() {
                acc += w;
                if acc > target && *w > 0.0 {
                    pick = i;
                    break;
                }
            }
            pick
        } else {
            // every point coincides with a chosen center
            rng.random_range(0..n)
        };
        chosen.push(next);
        for (i, d) in d2.iter_mut().enumerate() {
            *d = d.min(squared_euclidean(data.row(i), data.row(next)));
        }
    }
    data.select_rows(&chosen)
}

fn assign(data: &Matrix, centroids: &Matrix, labels: &mut [usize]) {
    for (i, label) in labels.iter_mut().enumerate() {
        let x = data.row(i);
        let mut best = (f64::INFINITY, 0);
        for c in 0..centroids.nrows() {
            let d = squared_euclidean(x, centroids.row(c));
            if d < best.0 {
                best = (d, c);
            }
        }
        *label = best.1;
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn blobs() -> Matrix {
        let mut rows = Vec::new();
        for (cx, cy) in [(0.0, 0.0), (10.0, 0.0), (0.0, 10.0)] {
            for i in 0..10 {
                let t = i as f64 * 0.01;
                rows.push([cx + t, cy - t]);
            }
        }
        Matrix::from_rows(&rows).unwrap()
    }

    #[test]
    fn separates_obvious_blobs() {
        let km = kmeans(&blobs(), 3, RunSeed(4)).unwrap();
        for b in 0..3 {
            let l = km.labels[b * 10];
            assert!(km.labels[b * 10..(b + 1) * 10].iter().all(|&x| x == l));
        }
        let mut distinct = km.labels.clone();
        distinct.sort();
        distinct.dedup();
        assert_eq!(distinct.len(), 3);
    }

    #[test]
    fn deterministic_per_seed() {
        let a = kmeans(&blobs(), 4, RunSeed(11)).unwrap();
        let b = kmeans(&blobs(), 4, RunSeed(11)).unwrap();
        assert_eq!(a.labels, b.labels);
        assert_eq!(a.centroids, b.centroids);
    }

    #[test]
    fn too_many_clusters() {
        assert!(kmeans(&Matrix::column_vector(&[1.0, 2.0]), 3, RunSeed(0)).is_err());
    }

    #[test]
    fn all_duplicates() {
        let km = kmeans(&Matrix::column_vector(&[1.0; 5]), 2, RunSeed(0)).unwrap();
        assert_eq!(km.labels.len(), 5);
    }
}
