use crate::error::{EvalError, Result};
use crate::matrix::Matrix;

use super::pareto::dominates;

/// Exact hypervolume dominated by `p` (maximization-framed) above `reference`.
///
/// Points that do not strictly exceed the reference in every objective add
/// nothing.
pub fn hypervolume(p: &Matrix, reference: &[f64]) -> Result<f64> {
    let m = reference.len();
    if m == 0 {
        return Err(EvalError::invalid("hypervolume needs at least one objective"));
    }
    p.ensure_cols(m, "hypervolume reference point")?;
    if !p.all_finite() || reference.iter().any(|r| !r.is_finite()) {
        return Err(EvalError::invalid("hypervolume inputs must be finite"));
    }
    let pts: Vec<Vec<f64>> = p
        .rows()
        .filter(|r| r.iter().zip(reference).all(|(x, r)| x > r))
        .map(|r| r.iter().zip(reference).map(|(x, r)| x - r).collect())
        .collect();
    Ok(wfg(nondominated(pts)))
}

fn nondominated(mut pts: Vec<Vec<f64>>) -> Vec<Vec<f64>> {
    pts.sort_by(|a, b| {
        a.iter()
            .zip(b)
            .map(|(x, y)| y.total_cmp(x))
            .find(|o| o.is_ne())
            .unwrap_or(std::cmp::Ordering::Equal)
    });
    pts.dedup();
    let mut front: Vec<Vec<f64>> = Vec::with_capacity(pts.len());
    for q in pts {
        if !front.iter().any(|f| dominates(f, &q)) {
            front.push(q);
        }
    }
    front
}

/// Volume of the union of boxes `[0, q]` for mutually non-dominated `q`.
fn wfg(mut pts: Vec<Vec<f64>>) -> f64 {
    match pts.first().map(Vec::len) {
        None => 0.0,
        Some(1) => pts.iter().map(|q| q[0]).fold(0.0, f64::max),
        Some(2) => sweep_2d(pts),
        Some(m) => {
            pts.sort_by(|a, b| b[m - 1].total_cmp(&a[m - 1]));
            (0..pts.len())
                .map(|i| {
                    let limited: Vec<Vec<f64>> = pts[i + 1..]
                        .iter()
                        .map(|s| s.iter().zip(&pts[i]).map(|(a, b)| a.min(*b)).collect())
                        .collect();
                    pts[i].iter().product::<f64>() - wfg(nondominated(limited))
                })
                .sum()
        }
    }
}

fn sweep_2d(mut pts: Vec<Vec<f64>>) -> f64 {
    pts.sort_by(|a, b| b[0].total_cmp(&a[0]).then(b[1].total_cmp(&a[1])));
    let mut area = 0.0;
    let mut top = 0.0f64;
    for q in pts {
        if q[1] > top {
            area += q[0] * (q[1] - top);
            top = q[1];
        }
    }
    area
}

/// Per-objective `q`-quantile with linear interpolation between order statistics.
pub fn quantile_point(p: &Matrix, q: f64) -> Result<Vec<f64>> {
    if p.is_empty() {
        return Err(EvalError::Empty("performance set"));
    }
    if !(0.0..=1.0).contains(&q) {
        return Err(EvalError::invalid(format!("quantile {q} outside [0, 1]")));
    }
    Ok((0..p.ncols())
        .map(|j| {
            let mut c = p.column(j);
            c.sort_by(f64::total_cmp);
            let pos = q * (c.len() - 1) as f64;
            let lo = pos.floor() as usize;
            let hi = pos.ceil() as usize;
            c[lo] + (c[hi] - c[lo]) * (pos - lo as f64)
        })
        .collect())
}

/// Reference point for dataset-driven runs: the 1st percentile of the
/// maximization-framed data, i.e. the 99th percentile of minimized objectives.
pub fn reference_point(p: &Matrix) -> Result<Vec<f64>> {
    quantile_point(p, 0.01)
}
