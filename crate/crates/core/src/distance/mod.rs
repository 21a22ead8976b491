//! Pairwise distances, point-set distances and the RBF kernel.

mod kernel;
mod neighbors;

pub(crate) use kernel::rbf_with_sigma;
pub use kernel::{median_heuristic, rbf_kernel_matrix, resolve_bandwidth, Bandwidth, MEDIAN_PAIR_BUDGET};
pub use neighbors::{nearest_distances, Neighbor, NeighborIndex, BRUTE_FORCE_BUDGET};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{EvalError, Result};
use crate::matrix::Matrix;

/// How two design vectors are compared.
///
/// `Chamfer` and `Hausdorff` read each row as a flattened set of
/// `point_dim`-dimensional points compared with the Euclidean base metric.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum DistanceSpec {
    #[default]
    Euclidean,
    Manhattan,
    Chebyshev,
    Cosine,
    Hamming {
        /// Divide the mismatch count by the dimension.
        #[serde(default)]
        normalized: bool,
    },
    Chamfer {
        point_dim: usize,
    },
    Hausdorff {
        point_dim: usize,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointSetKind {
    Chamfer,
    Hausdorff,
}

impl DistanceSpec {
    pub fn name(&self) -> &'static str {
        match self {
            DistanceSpec::Euclidean => "euclidean",
            DistanceSpec::Manhattan => "manhattan",
            DistanceSpec::Chebyshev => "chebyshev",
            DistanceSpec::Cosine => "cosine",
            DistanceSpec::Hamming { .. } => "hamming",
            DistanceSpec::Chamfer { .. } => "chamfer",
            DistanceSpec::Hausdorff { .. } => "hausdorff",
        }
    }

    /// Metrics whose per-axis gap lower-bounds the distance (usable in a k-d tree).
    pub(crate) fn is_coordinate_bounded(&self) -> bool {
        matches!(
            self,
            DistanceSpec::Euclidean | DistanceSpec::Manhattan | DistanceSpec::Chebyshev
        )
    }

    /// Check that every row of `x` is admissible for this distance.
    pub fn validate(&self, x: &Matrix) -> Result<()> {
        match *self {
            DistanceSpec::Cosine => {
                for (i, r) in x.rows().enumerate() {
                    if r.iter().all(|v| *v == 0.0) {
                        return Err(EvalError::ZeroVector { row: i });
                    }
                }
            }
            DistanceSpec::Hamming { .. } => {
                if x.as_slice().iter().any(|v| v.fract() != 0.0) {
                    return Err(EvalError::invalid(
                        "hamming distance requires integer-coded or one-hot columns",
                    ));
                }
            }
            DistanceSpec::Chamfer { point_dim } | DistanceSpec::Hausdorff { point_dim } => {
                if point_dim == 0 || !x.ncols().is_multiple_of(point_dim) || x.ncols() == 0 {
                    return Err(EvalError::invalid(format!(
                        "row length {} is not a positive multiple of point_dim {point_dim}",
                        x.ncols()
                    )));
                }
            }
            _ => {}
        }
        Ok(())
    }

    /// Distance between two rows. Inputs are assumed validated.
    pub fn eval(&self, a: &[f64], b: &[f64]) -> f64 {
        match *self {
            DistanceSpec::Euclidean => euclidean(a, b),
            DistanceSpec::Manhattan => a.iter().zip(b).map(|(x, y)| (x - y).abs()).sum(),
            DistanceSpec::Chebyshev => a
                .iter()
                .zip(b)
                .map(|(x, y)| (x - y).abs())
                .fold(0.0, f64::max),
            DistanceSpec::Cosine => {
                let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
                let na = a.iter().map(|x| x * x).sum::<f64>().sqrt();
                let nb = b.iter().map(|x| x * x).sum::<f64>().sqrt();
                (1.0 - dot / (na * nb)).clamp(0.0, 2.0)
            }
            DistanceSpec::Hamming { normalized } => {
                let count = a.iter().zip(b).filter(|(x, y)| x != y).count() as f64;
                if normalized {
                    count / a.len() as f64
                } else {
                    count
                }
            }
            DistanceSpec::Chamfer { point_dim } => {
                let (p, q) = (a.chunks(point_dim), b.chunks(point_dim));
                directed_mean(p.clone(), q.clone()) + directed_mean(q, p)
            }
            DistanceSpec::Hausdorff { point_dim } => {
                let (p, q) = (a.chunks(point_dim), b.chunks(point_dim));
                directed_max(p.clone(), q.clone()).max(directed_max(q, p))
            }
        }
    }
}

pub(crate) fn euclidean(a: &[f64], b: &[f64]) -> f64 {
    squared_euclidean(a, b).sqrt()
}

pub(crate) fn squared_euclidean(a: &[f64], b: &[f64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y) * (x - y)).sum()
}

fn nearest_in<'a>(p: &[f64], q: impl Iterator<Item = &'a [f64]>) -> f64 {
    q.map(|y| euclidean(p, y)).fold(f64::INFINITY, f64::min)
}

fn directed_mean<'a>(
    p: impl Iterator<Item = &'a [f64]>,
    q: impl Iterator<Item = &'a [f64]> + Clone,
) -> f64 {
    let (mut sum, mut n) = (0.0, 0usize);
    for x in p {
        sum += nearest_in(x, q.clone());
        n += 1;
    }
    sum / n as f64
}

fn directed_max<'a>(
    p: impl Iterator<Item = &'a [f64]>,
    q: impl Iterator<Item = &'a [f64]> + Clone,
) -> f64 {
    p.map(|x| nearest_in(x, q.clone())).fold(0.0, f64::max)
}

/// All distances between rows of `a` and rows of `b`.
pub fn pairwise(a: &Matrix, b: &Matrix, spec: &DistanceSpec) -> Result<Matrix> {
    b.ensure_cols(a.ncols(), "pairwise distance")?;
    spec.validate(a)?;
    spec.validate(b)?;
    let rows: Vec<f64> = (0..a.nrows())
        .into_par_iter()
        .flat_map_iter(|i| {
            let ai = a.row(i);
            (0..b.nrows()).map(move |j| spec.eval(ai, b.row(j)))
        })
        .collect();
    Matrix::from_vec(a.nrows(), b.nrows(), rows)
}

/// Chamfer or Hausdorff distance between two point sets, using `base` between points.
///
/// Chamfer is the sum of both directed mean nearest-neighbor distances;
/// Hausdorff is the larger of the two directed maxima.
pub fn point_set_distance(
    p: &Matrix,
    q: &Matrix,
    kind: PointSetKind,
    base: &DistanceSpec,
) -> Result<f64> {
    if p.is_empty() || q.is_empty() {
        return Err(EvalError::Empty("point set"));
    }
    let d = pairwise(p, q, base)?;
    let row_min: Vec<f64> = (0..d.nrows())
        .map(|i| d.row(i).iter().copied().fold(f64::INFINITY, f64::min))
        .collect();
    let col_min: Vec<f64> = (0..d.ncols())
        .map(|j| (0..d.nrows()).map(|i| d.get(i, j)).fold(f64::INFINITY, f64::min))
        .collect();
    Ok(match kind {
        PointSetKind::Chamfer => {
            row_min.iter().sum::<f64>() / row_min.len() as f64
                + col_min.iter().sum::<f64>() / col_min.len() as f64
        }
        PointSetKind::Hausdorff => row_min
            .iter()
            .chain(&col_min)
            .copied()
            .fold(0.0, f64::max),
    })
}

/// Directed Hausdorff distance max_{p∈P} min_{q∈Q} d(p, q).
pub fn directed_hausdorff(p: &Matrix, q: &Matrix, base: &DistanceSpec) -> Result<f64> {
    if p.is_empty() || q.is_empty() {
        return Err(EvalError::Empty("point set"));
    }
    Ok(nearest_distances(p, q, base)?.into_iter().fold(0.0, f64::max))
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn m(rows: &[&[f64]]) -> Matrix {
        Matrix::from_rows(rows).unwrap()
    }

    #[test]
    fn three_four_five() {
        let d = pairwise(&m(&[&[0.0, 0.0]]), &m(&[&[3.0, 4.0]]), &DistanceSpec::Euclidean).unwrap();
        assert_eq!(d.get(0, 0), 5.0);
    }

    #[test]
    fn hamming_one_hot() {
        let spec = DistanceSpec::Hamming { normalized: false };
        assert_eq!(spec.eval(&[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0]), 2.0);
        let spec = DistanceSpec::Hamming { normalized: true };
        assert!((spec.eval(&[0.0, 1.0, 0.0], &[1.0, 0.0, 0.0]) - 2.0 / 3.0).abs() < 1e-15);
        assert!(spec.validate(&m(&[&[0.5]])).is_err());
    }

    #[test]
    fn cosine_orthogonal_and_zero() {
        assert!((DistanceSpec::Cosine.eval(&[1.0, 0.0], &[0.0, 1.0]) - 1.0).abs() < 1e-15);
        let err = pairwise(&m(&[&[0.0, 0.0]]), &m(&[&[1.0, 0.0]]), &DistanceSpec::Cosine);
        assert!(matches!(err, Err(EvalError::ZeroVector { row: 0 })));
    }

    #[test]
    fn dimension_mismatch() {
        assert!(pairwise(&m(&[&[0.0]]), &m(&[&[0.0, 1.0]]), &DistanceSpec::Euclidean).is_err());
    }

    #[test]
    fn point_sets() {
        let e = DistanceSpec::Euclidean;
        let p = m(&[&[0.0]]);
        let q = m(&[&[1.0]]);
        assert_eq!(point_set_distance(&p, &p, PointSetKind::Chamfer, &e).unwrap(), 0.0);
        assert_eq!(point_set_distance(&p, &p, PointSetKind::Hausdorff, &e).unwrap(), 0.0);
        assert_eq!(point_set_distance(&p, &q, PointSetKind::Chamfer, &e).unwrap(), 2.0);
        assert_eq!(point_set_distance(&p, &q, PointSetKind::Hausdorff, &e).unwrap(), 1.0);
        let p2 = m(&[&[0.0], &[10.0]]);
        assert_eq!(point_set_distance(&p2, &p, PointSetKind::Hausdorff, &e).unwrap(), 10.0);
        let empty = Matrix::zeros(0, 1);
        assert!(point_set_distance(&empty, &p, PointSetKind::Chamfer, &e).is_err());
    }

    #[test]
    fn flattened_point_set_rows() {
        // Row = two 1-D points.
        let spec = DistanceSpec::Chamfer { point_dim: 1 };
        assert_eq!(spec.eval(&[0.0, 10.0], &[0.0, 10.0]), 0.0);
        let spec = DistanceSpec::Hausdorff { point_dim: 1 };
        assert_eq!(spec.eval(&[0.0, 10.0], &[0.0, 0.0]), 10.0);
        assert!(spec.validate(&m(&[&[1.0, 2.0]])).is_ok());
        assert!(DistanceSpec::Chamfer { point_dim: 2 }.validate(&m(&[&[1.0, 2.0, 3.0]])).is_err());
    }

    fn small_matrix(rows: usize, cols: usize) -> impl Strategy<Value = Matrix> {
        prop::collection::vec(-5.0f64..5.0, rows * cols)
            .prop_map(move |v| Matrix::from_vec(rows, cols, v).unwrap())
    }

    const METRICS: [DistanceSpec; 3] = [
        DistanceSpec::Euclidean,
        DistanceSpec::Manhattan,
        DistanceSpec::Chebyshev,
    ];

    proptest! {
        #[test]
        fn symmetric_nonnegative_zero_diagonal(a in small_matrix(6, 3)) {
            for spec in METRICS.iter().chain(&[DistanceSpec::Hausdorff { point_dim: 1 }, DistanceSpec::Chamfer { point_dim: 3 }]) {
                let d = pairwise(&a, &a, spec).unwrap();
                for i in 0..6 {
                    prop_assert_eq!(d.get(i, i), 0.0);
                    for j in 0..6 {
                        prop_assert!(d.get(i, j) >= 0.0);
                        prop_assert_eq!(d.get(i, j), d.get(j, i));
                    }
                }
            }
        }

        #[test]
        fn transpose_symmetry(a in small_matrix(4, 2), b in small_matrix(3, 2)) {
            for spec in METRICS {
                prop_assert_eq!(pairwise(&a, &b, &spec).unwrap(), pairwise(&b, &a, &spec).unwrap().transpose());
            }
        }

        #[test]
        fn triangle_inequality(x in small_matrix(3, 4), codes in prop::collection::vec(0u8..3, 12)) {
            let (a, b, c) = (x.row(0), x.row(1), x.row(2));
            for spec in METRICS {
                prop_assert!(spec.eval(a, c) <= spec.eval(a, b) + spec.eval(b, c) + 1e-12);
            }
            let h: Vec<f64> = codes.iter().map(|&c| c as f64).collect();
            let ham = DistanceSpec::Hamming { normalized: false };
            let (a, b, c) = (&h[0..4], &h[4..8], &h[8..12]);
            prop_assert!(ham.eval(a, c) <= ham.eval(a, b) + ham.eval(b, c));
        }

        #[test]
        fn hausdorff_bounds_directed(p in small_matrix(5, 2), q in small_matrix(4, 2)) {
            let e = DistanceSpec::Euclidean;
            let h = point_set_distance(&p, &q, PointSetKind::Hausdorff, &e).unwrap();
            prop_assert!(h >= directed_hausdorff(&p, &q, &e).unwrap());
            prop_assert!(h >= directed_hausdorff(&q, &p, &e).unwrap());
            let c = point_set_distance(&p, &q, PointSetKind::Chamfer, &e).unwrap();
            prop_assert!(c > 1e-12);
            // Same multiset in another order gives zero chamfer.
            let rev: Vec<usize> = (0..5).rev().collect();
            prop_assert!(point_set_distance(&p, &p.select_rows(&rev), PointSetKind::Chamfer, &e).unwrap() <= 1e-12);
        }
    }
}
