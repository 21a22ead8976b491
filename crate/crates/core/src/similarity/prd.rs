//! Precision-recall curves for distributions via pooled k-means histograms.

use std::f64::consts::FRAC_PI_2;
use std::io::Write;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::kmeans::kmeans;
use crate::error::{EvalError, Result};
use crate::matrix::Matrix;
use crate::seed::RunSeed;

/// Offset keeping the angle sweep strictly inside (0, π/2).
const ANGLE_EPS: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default)]
pub struct PrdSettings {
    pub clusters: usize,
    pub angle_resolution: usize,
    pub runs: usize,
}

impl Default for PrdSettings {
    fn default() -> Self {
        PrdSettings {
            clusters: 20,
            angle_resolution: 1000,
            runs: 10,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct PrCurve {
    /// (precision, recall) in order of increasing λ.
    pub points: Vec<(f64, f64)>,
    pub cluster_count: usize,
    pub runs: usize,
    pub angle_resolution: usize,
}

/// λ = tan θ for `resolution` angles evenly spaced over (0, π/2).
pub fn lambda_grid(resolution: usize) -> Vec<f64> {
    if resolution == 1 {
        return vec![1.0];
    }
    let (lo, hi) = (ANGLE_EPS, FRAC_PI_2 - ANGLE_EPS);
    (0..resolution)
        .map(|i| (lo + (hi - lo) * i as f64 / (resolution - 1) as f64).tan())
        .collect()
}

/// PR points from a reference histogram `p` and a generated histogram `q`:
/// precision(λ) = Σ min(λ·p_i, q_i), recall(λ) = Σ min(p_i, q_i/λ).
pub fn pr_from_histograms(p: &[f64], q: &[f64], lambdas: &[f64]) -> Vec<(f64, f64)> {
    lambdas
        .iter()
        .map(|&l| {
            let precision: f64 = p.iter().zip(q).map(|(pi, qi)| (l * pi).min(*qi)).sum();
            let recall: f64 = p.iter().zip(q).map(|(pi, qi)| pi.min(qi / l)).sum();
            (precision.clamp(0.0, 1.0), recall.clamp(0.0, 1.0))
        })
        .collect()
}

fn histogram(labels: &[usize], k: usize) -> Vec<f64> {
    let mut h = vec![0.0; k];
    for &l in labels {
        h[l] += 1.0;
    }
    let n = labels.len() as f64;
    h.iter_mut().for_each(|v| *v /= n);
    h
}

/// Pool both sets, cluster them `runs` times, and average the per-run PR
/// curves pointwise on a shared λ grid.
pub fn prd_curve(
    real: &Matrix,
    generated: &Matrix,
    settings: PrdSettings,
    seed: RunSeed,
) -> Result<PrCurve> {
    if real.is_empty() || generated.is_empty() {
        return Err(EvalError::Empty("PR curve input set"));
    }
    let PrdSettings {
        clusters,
        angle_resolution,
        runs,
    } = settings;
    if clusters < 2 {
        return Err(EvalError::invalid("PR curves need at least 2 clusters"));
    }
    if angle_resolution < 2 || runs == 0 {
        return Err(EvalError::invalid("angle_resolution must be ≥ 2 and runs ≥ 1"));
    }
    let pooled = real.vstack(generated)?;
    if clusters > pooled.nrows() {
        return Err(EvalError::invalid(format!(
            "{clusters} clusters exceed the {} pooled points",
            pooled.nrows()
        )));
    }
    let n_real = real.nrows();
    let lambdas = lambda_grid(angle_resolution);

    let per_run: Vec<Vec<(f64, f64)>> = (0..runs)
        .into_par_iter()
        .map(|run| {
            let km = kmeans(&pooled, clusters, seed.derive(run as u64))?;
            let p = histogram(&km.labels[..n_real], clusters);
            let q = histogram(&km.labels[n_real..], clusters);
            Ok(pr_from_histograms(&p, &q, &lambdas))
        })
        .collect::<Result<_>>()?;

    let mut points = vec![(0.0, 0.0); angle_resolution];
    for curve in &per_run {
        for (acc, (p, r)) in points.iter_mut().zip(curve) {
            acc.0 += p;
            acc.1 += r;
        }
    }
    let inv = 1.0 / runs as f64;
    points.iter_mut().for_each(|(p, r)| {
        *p = (*p * inv).clamp(0.0, 1.0);
        *r = (*r * inv).clamp(0.0, 1.0);
    });
    Ok(PrCurve {
        points,
        cluster_count: clusters,
        runs,
        angle_resolution,
    })
}

fn f_beta_point(p: f64, r: f64, beta: f64) -> f64 {
    let b2 = beta * beta;
    let denom = b2 * p + r;
    if denom <= 0.0 {
        0.0
    } else {
        (1.0 + b2) * p * r / denom
    }
}

/// Maximum F_β over the curve. β ≪ 1 tracks precision, β ≫ 1 tracks recall.
pub fn f_beta(curve: &PrCurve, beta: f64) -> f64 {
    curve
        .points
        .iter()
        .map(|&(p, r)| f_beta_point(p, r, beta))
        .fold(0.0, f64::max)
}

/// Trapezoidal area under precision as a function of recall.
pub fn pr_auc(curve: &PrCurve) -> f64 {
    let mut pts = curve.points.clone();
    pts.sort_by(|a, b| a.1.total_cmp(&b.1).then(b.0.total_cmp(&a.0)));
    pts.windows(2)
        .map(|w| (w[1].1 - w[0].1) * 0.5 * (w[0].0 + w[1].0))
        .sum::<f64>()
        .clamp(0.0, 1.0)
}

/// CSV with columns `set,lambda_index,precision,recall`, one block per labeled curve.
pub fn write_pr_curve_csv<W: Write>(writer: W, curves: &[(&str, &PrCurve)]) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    w.write_record(["set", "lambda_index", "precision", "recall"])?;
    for (label, curve) in curves {
        for (i, (p, r)) in curve.points.iter().enumerate() {
            w.write_record([label.to_string(), i.to_string(), p.to_string(), r.to_string()])?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn curve(points: Vec<(f64, f64)>) -> PrCurve {
        PrCurve {
            points,
            cluster_count: 2,
            runs: 1,
            angle_resolution: 2,
        }
    }

    #[test]
    fn hand_histogram_example() {
        let pts = pr_from_histograms(&[1.0, 0.0], &[0.5, 0.5], &[1.0]);
        assert!((pts[0].0 - 0.5).abs() < 1e-15);
    }

    #[test]
    fn lambda_grid_covers_both_ends() {
        let g = lambda_grid(1000);
        assert!(g[0] < 1e-9);
        assert!(g[999] > 1e9);
        assert!(g.windows(2).all(|w| w[1] > w[0]));
    }

    #[test]
    fn f_beta_examples() {
        assert_eq!(f_beta(&curve(vec![(1.0, 1.0), (0.2, 0.1)]), 10.0), 1.0);
        assert_eq!(f_beta(&curve(vec![(1.0, 1.0)]), 0.1), 1.0);
        assert!((f_beta(&curve(vec![(0.5, 0.5)]), 1.0) - 0.5).abs() < 1e-15);
        // (1+β²)pr/(β²p+r) at p=1, r=0.25
        let c = curve(vec![(1.0, 0.25)]);
        assert!((f_beta(&c, 10.0) - 101.0 * 0.25 / 100.25).abs() < 1e-12);
        assert!((f_beta(&c, 0.1) - 1.01 * 0.25 / 0.26).abs() < 1e-12);
        assert_eq!(f_beta(&curve(vec![(0.0, 0.0)]), 1.0), 0.0);
    }

    #[test]
    fn auc_examples() {
        assert!((pr_auc(&curve(vec![(1.0, 0.0), (1.0, 1.0)])) - 1.0).abs() < 1e-15);
        assert!((pr_auc(&curve(vec![(0.0, 1.0), (1.0, 0.0)])) - 0.5).abs() < 1e-15);
    }

    #[test]
    fn identical_and_disjoint_sets() {
        let a = Matrix::from_rows(
            &(0..60)
                .map(|i| [(i % 6) as f64 + 0.01 * (i as f64), (i / 6) as f64])
                .collect::<Vec<_>>(),
        )
        .unwrap();
        let s = PrdSettings { clusters: 10, angle_resolution: 200, runs: 3 };
        let same = prd_curve(&a, &a, s, RunSeed(1)).unwrap();
        assert!(f_beta(&same, 1.0) >= 0.98);
        assert!(pr_auc(&same) >= 0.95);
        let far = a.map(|v| v + 1000.0);
        let diff = prd_curve(&a, &far, s, RunSeed(1)).unwrap();
        assert!(f_beta(&diff, 1.0) <= 0.02);
        assert!(diff.points.iter().all(|&(p, r)| (0.0..=1.0).contains(&p) && (0.0..=1.0).contains(&r)));
    }

    #[test]
    fn rejects_too_many_clusters() {
        let a = Matrix::column_vector(&[0.0, 1.0]);
        let s = PrdSettings { clusters: 5, angle_resolution: 10, runs: 1 };
        assert!(prd_curve(&a, &a, s, RunSeed(0)).is_err());
    }

    #[test]
    fn csv_export() {
        let mut buf = Vec::new();
        write_pr_curve_csv(&mut buf, &[("gen", &curve(vec![(1.0, 0.5), (0.5, 1.0)]))]).unwrap();
        let s = String::from_utf8(buf).unwrap();
        assert_eq!(s, "set,lambda_index,precision,recall\ngen,0,1,0.5\ngen,1,0.5,1\n");
    }
}
