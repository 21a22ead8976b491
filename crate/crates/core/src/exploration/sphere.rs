//! Smallest enclosing hypersphere.

use nalgebra::{DMatrix, DVector};
use rand::seq::SliceRandom;
use statrs::function::gamma::ln_gamma;

use crate::distance::euclidean;
use crate::error::{EvalError, Result};
use crate::matrix::Matrix;
use crate::seed::RunSeed;

/// Above this dimension the ball is approximated with Bădoiu–Clarkson.
pub const EXACT_MAX_DIM: usize = 3;
pub const CORESET_EPS: f64 = 0.01;

#[derive(Debug, Clone, PartialEq)]
pub struct EnclosingSphere {
    pub center: Vec<f64>,
    pub radius: f64,
    pub volume: f64,
    pub exact: bool,
    /// Upper bound on `radius / optimal radius`.
    pub approximation_factor: f64,
}

/// Volume of a `d`-ball of radius `r`.
pub fn ball_volume(d: usize, r: f64) -> f64 {
    if r == 0.0 {
        return 0.0;
    }
    let h = d as f64 / 2.0;
    (h * std::f64::consts::PI.ln() - ln_gamma(h + 1.0) + d as f64 * r.ln()).exp()
}

pub fn smallest_enclosing_hypersphere(x: &Matrix) -> Result<EnclosingSphere> {
    if x.is_empty() {
        return Err(EvalError::Empty("generated set"));
    }
    if !x.all_finite() {
        return Err(EvalError::invalid("enclosing sphere needs finite coordinates"));
    }
    let d = x.ncols();
    let (center, exact, factor) = if d <= EXACT_MAX_DIM {
        (welzl(x), true, 1.0)
    } else {
        (badoiu_clarkson(x, CORESET_EPS), false, 1.0 + CORESET_EPS)
    };
    let radius = x.rows().map(|r| euclidean(r, &center)).fold(0.0, f64::max);
    Ok(EnclosingSphere {
        volume: ball_volume(d, radius),
        center,
        radius,
        exact,
        approximation_factor: factor,
    })
}

struct Ball {
    center: Vec<f64>,
    sq_radius: f64,
}

impl Ball {
    fn contains(&self, p: &[f64], slack: f64) -> bool {
        let d2: f64 = p.iter().zip(&self.center).map(|(a, b)| (a - b) * (a - b)).sum();
        d2 <= self.sq_radius * (1.0 + 1e-10) + slack
    }
}

/// Circumscribed ball of the support set inside its affine hull.
fn support_ball(support: &[&[f64]], d: usize) -> Ball {
    match support.len() {
        0 => Ball {
            center: vec![0.0; d],
            sq_radius: -1.0,
        },
        1 => Ball {
            center: support[0].to_vec(),
            sq_radius: 0.0,
        },
        m => {
            let p0 = support[0];
            let q = DMatrix::from_fn(d, m - 1, |i, j| support[j + 1][i] - p0[i]);
            let g = q.transpose() * &q;
            let rhs = DVector::from_fn(m - 1, |j, _| 0.5 * g[(j, j)]);
            let lambda = g
                .clone()
                .lu()
                .solve(&rhs)
                .filter(|l| l.iter().all(|v| v.is_finite()))
                .unwrap_or_else(|| {
                    g.svd(true, true)
                        .solve(&rhs, 1e-12)
                        .unwrap_or_else(|_| DVector::zeros(m - 1))
                });
            let offset = q * lambda;
            let center: Vec<f64> = (0..d).map(|i| p0[i] + offset[i]).collect();
            let sq_radius = support
                .iter()
                .map(|p| p.iter().zip(&center).map(|(a, b)| (a - b) * (a - b)).sum::<f64>())
                .fold(0.0, f64::max);
            Ball { center, sq_radius }
        }
    }
}

/// Move-to-front Welzl. Recursion depth is bounded by `d + 1`.
fn welzl(x: &Matrix) -> Vec<f64> {
    let d = x.ncols();
    let mut order: Vec<usize> = (0..x.nrows()).collect();
    order.shuffle(&mut RunSeed(0).rng());
    let scale = {
        let c = x.mean_row();
        x.rows().map(|r| euclidean(r, &c)).fold(0.0, f64::max)
    };
    let slack = 1e-20 * scale * scale;
    let mut support: Vec<&[f64]> = Vec::with_capacity(d + 1);
    mtf(x, &mut order, x.nrows(), &mut support, d, slack).center
}

fn mtf<'a>(
    x: &'a Matrix,
    order: &mut Vec<usize>,
    end: usize,
    support: &mut Vec<&'a [f64]>,
    d: usize,
    slack: f64,
) -> Ball {
    let mut ball = support_ball(support, d);
    if support.len() == d + 1 {
        return ball;
    }
    for i in 0..end {
        let p = x.row(order[i]);
        if !ball.contains(p, slack) {
            support.push(p);
            ball = mtf(x, order, i, support, d, slack);
            support.pop();
            order[..=i].rotate_right(1);
        }
    }
    ball
}

fn badoiu_clarkson(x: &Matrix, eps: f64) -> Vec<f64> {
    let iters = (1.0 / (eps * eps)).ceil() as usize;
    let mut c = x.row(0).to_vec();
    for t in 1..=iters {
        let far = x
            .rows()
            .max_by(|a, b| euclidean(a, &c).total_cmp(&euclidean(b, &c)))
            .expect("non-empty");
        let step = 1.0 / (t as f64 + 1.0);
        for (ci, fi) in c.iter_mut().zip(far) {
            *ci += (fi - *ci) * step;
        }
    }
    c
}
