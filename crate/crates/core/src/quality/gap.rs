use serde::{Deserialize, Serialize};

use crate::distance::euclidean;
use crate::error::{EvalError, Result};

/// Backtracking gradient descent settings. The objective is minimized.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct DescentSettings {
    pub steps: usize,
    pub initial_step: f64,
    pub shrink: f64,
    /// Armijo sufficient-decrease constant.
    pub armijo: f64,
    pub grad_tol: f64,
    /// Optional box; iterates are projected onto it.
    pub lower: Option<Vec<f64>>,
    pub upper: Option<Vec<f64>>,
}

impl Default for DescentSettings {
    fn default() -> Self {
        DescentSettings {
            steps: 1000,
            initial_step: 1.0,
            shrink: 0.5,
            armijo: 1e-4,
            grad_tol: 1e-8,
            lower: None,
            upper: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OptGapResult {
    /// Distance from the start to the final iterate.
    pub design_space_gap: f64,
    /// Objective decrease from start to final iterate.
    pub objective_gap: f64,
    /// Distance moved by the first step.
    pub instantaneous_design_gap: f64,
    pub path_length: f64,
    pub steps_taken: usize,
    pub converged: bool,
    pub minimizer: Vec<f64>,
}

const MAX_BACKTRACKS: usize = 60;

/// Central differences with step `1e-6 * (1 + |x_i|)`.
pub fn finite_difference_gradient(f: &dyn Fn(&[f64]) -> f64, x: &[f64]) -> Vec<f64> {
    bounded_difference_gradient(f, x, None, None)
}

/// Like [`finite_difference_gradient`], but probes never leave the box:
/// one-sided differences are used within a step of a bound.
pub fn bounded_difference_gradient(
    f: &dyn Fn(&[f64]) -> f64,
    x: &[f64],
    lower: Option<&[f64]>,
    upper: Option<&[f64]>,
) -> Vec<f64> {
    let mut probe = x.to_vec();
    (0..x.len())
        .map(|i| {
            let h = 1e-6 * (1.0 + x[i].abs());
            let hi = upper.map_or(x[i] + h, |u| (x[i] + h).min(u[i]));
            let lo = lower.map_or(x[i] - h, |l| (x[i] - h).max(l[i]));
            if hi <= lo {
                return 0.0;
            }
            probe[i] = hi;
            let up = f(&probe);
            probe[i] = lo;
            let down = f(&probe);
            probe[i] = x[i];
            (up - down) / (hi - lo)
        })
        .collect()
}

pub fn optimality_gap(
    x0: &[f64],
    objective: &dyn Fn(&[f64]) -> f64,
    gradient: Option<&dyn Fn(&[f64]) -> Vec<f64>>,
    settings: &DescentSettings,
) -> Result<OptGapResult> {
    if x0.is_empty() {
        return Err(EvalError::Empty("design vector"));
    }
    for bound in [&settings.lower, &settings.upper].into_iter().flatten() {
        if bound.len() != x0.len() {
            return Err(EvalError::DimensionMismatch {
                context: "descent bounds",
                expected: x0.len(),
                found: bound.len(),
            });
        }
    }
    let project = |x: &mut [f64]| {
        for (i, v) in x.iter_mut().enumerate() {
            if let Some(lo) = &settings.lower {
                *v = v.max(lo[i]);
            }
            if let Some(hi) = &settings.upper {
                *v = v.min(hi[i]);
            }
        }
    };
    let eval = |x: &[f64]| -> Result<f64> {
        let v = objective(x);
        if v.is_finite() {
            Ok(v)
        } else {
            Err(EvalError::NonFinite { iterate: x.to_vec() })
        }
    };
    let grad = |x: &[f64]| -> Result<Vec<f64>> {
        let g = match gradient {
            Some(g) => g(x),
            None => bounded_difference_gradient(objective, x, settings.lower.as_deref(), settings.upper.as_deref()),
        };
        if g.len() != x.len() {
            return Err(EvalError::DimensionMismatch {
                context: "gradient",
                expected: x.len(),
                found: g.len(),
            });
        }
        if g.iter().all(|v| v.is_finite()) {
            Ok(g)
        } else {
            Err(EvalError::NonFinite { iterate: x.to_vec() })
        }
    };

    let mut x = x0.to_vec();
    project(&mut x);
    let f0 = eval(&x)?;
    let mut fx = f0;
    let mut first_step = None;
    let mut path_length = 0.0;
    let mut steps_taken = 0;
    let mut converged = false;
    for _ in 0..settings.steps {
        let g = grad(&x)?;
        let gnorm = g.iter().map(|v| v * v).sum::<f64>().sqrt();
        if gnorm < settings.grad_tol {
            converged = true;
            break;
        }
        let mut t = settings.initial_step;
        let mut accepted = None;
        for _ in 0..MAX_BACKTRACKS {
            let mut cand: Vec<f64> = x.iter().zip(&g).map(|(xi, gi)| xi - t * gi).collect();
            project(&mut cand);
            // Armijo along the projected step
            let moved: f64 = cand.iter().zip(&x).zip(&g).map(|((c, xi), gi)| gi * (xi - c)).sum();
            let fc = eval(&cand)?;
            if fc <= fx - settings.armijo * moved {
                accepted = Some((cand, fc));
                break;
            }
            t *= settings.shrink;
        }
        let Some((next, fnext)) = accepted else {
            // no decrease possible at machine precision
            converged = true;
            break;
        };
        let step = euclidean(&next, &x);
        if step == 0.0 {
            // projected gradient vanished on the box boundary
            converged = true;
            break;
        }
        first_step.get_or_insert(step);
        path_length += step;
        steps_taken += 1;
        x = next;
        fx = fnext;
    }
    Ok(OptGapResult {
        design_space_gap: euclidean(&x, x0),
        objective_gap: f0 - fx,
        instantaneous_design_gap: first_step.unwrap_or(0.0),
        path_length,
        steps_taken,
        converged,
        minimizer: x,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sq(x: &[f64]) -> f64 {
        x.iter().map(|v| v * v).sum()
    }

    #[test]
    fn stationary_start() {
        let r = optimality_gap(&[0.0, 0.0], &sq, None, &DescentSettings::default()).unwrap();
        assert_eq!(r.design_space_gap, 0.0);
        assert_eq!(r.objective_gap, 0.0);
        assert_eq!(r.instantaneous_design_gap, 0.0);
        assert!(r.converged);
    }

    #[test]
    fn unit_quadratic() {
        let g = |x: &[f64]| x.iter().map(|v| 2.0 * v).collect::<Vec<_>>();
        let r = optimality_gap(&[1.0, 0.0], &sq, Some(&g), &DescentSettings::default()).unwrap();
        assert!(r.minimizer.iter().all(|v| v.abs() < 1e-12));
        assert!((r.design_space_gap - 1.0).abs() < 1e-12);
        assert!((r.objective_gap - 1.0).abs() < 1e-12);
        // step 1 overshoots to f = 1, so the accepted step is 0.5 * |grad| = 1
        assert!((r.instantaneous_design_gap - 1.0).abs() < 1e-12);
        assert!(r.instantaneous_design_gap <= r.path_length + 1e-15);
    }

    #[test]
    fn finite_differences_match() {
        let f = |x: &[f64]| x[0].powi(3) + x[0] * x[1];
        let g = finite_difference_gradient(&f, &[1.0, 2.0]);
        assert!((g[0] - 5.0).abs() < 1e-6 && (g[1] - 1.0).abs() < 1e-6);
    }

    #[test]
    fn box_projection_and_nonfinite() {
        let s = DescentSettings {
            lower: Some(vec![0.5]),
            upper: Some(vec![2.0]),
            ..Default::default()
        };
        let r = optimality_gap(&[1.5], &sq, None, &s).unwrap();
        assert!((r.minimizer[0] - 0.5).abs() < 1e-12);
        // probes at the bound stay inside the domain
        let domain = |x: &[f64]| if x[0] > 2.0 { f64::NAN } else { x[0] * x[0] };
        let r = optimality_gap(&[2.0], &domain, None, &s).unwrap();
        assert!((r.minimizer[0] - 0.5).abs() < 1e-12);
        let bad = |x: &[f64]| if x[0] < 0.5 { f64::NAN } else { x[0] * x[0] };
        let err = optimality_gap(&[1.0], &bad, None, &DescentSettings::default()).unwrap_err();
        assert!(matches!(err, EvalError::NonFinite { .. }));
    }
}
