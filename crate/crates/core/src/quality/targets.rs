use serde::{Deserialize, Serialize};

use crate::data::ObjectiveDirection;
use crate::error::{EvalError, Result};

/// Performance targets in raw units.
///
/// Metrics take performance vectors in the maximization frame used by
/// [`crate::data::DesignSet`]; ratios are formed in raw units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TargetSpec {
    pub targets: Vec<f64>,
    /// Empty means every objective is maximized.
    #[serde(default)]
    pub directions: Vec<ObjectiveDirection>,
    #[serde(default)]
    pub weights: Option<Vec<f64>>,
    #[serde(default)]
    pub alpha: Option<Vec<f64>>,
    #[serde(default)]
    pub beta: Option<Vec<f64>>,
}

impl TargetSpec {
    pub fn new(targets: Vec<f64>) -> Self {
        TargetSpec {
            targets,
            directions: Vec::new(),
            weights: None,
            alpha: None,
            beta: None,
        }
    }

    pub fn with_directions(mut self, directions: Vec<ObjectiveDirection>) -> Self {
        self.directions = directions;
        self
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Self {
        self.weights = Some(weights);
        self
    }

    pub fn with_alpha_beta(mut self, alpha: Vec<f64>, beta: Vec<f64>) -> Self {
        self.alpha = Some(alpha);
        self.beta = Some(beta);
        self
    }

    pub fn len(&self) -> usize {
        self.targets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.targets.is_empty()
    }

    fn direction(&self, i: usize) -> ObjectiveDirection {
        self.directions.get(i).copied().unwrap_or_default()
    }

    pub fn weights(&self) -> Vec<f64> {
        self.weights.clone().unwrap_or_else(|| vec![1.0; self.len()])
    }

    fn alpha_beta(&self) -> (Vec<f64>, Vec<f64>) {
        let ones = vec![1.0; self.len()];
        (
            self.alpha.clone().unwrap_or_else(|| ones.clone()),
            self.beta.clone().unwrap_or(ones),
        )
    }

    pub fn validate(&self) -> Result<()> {
        let m = self.len();
        if m == 0 {
            return Err(EvalError::invalid("no performance targets given"));
        }
        if self.targets.iter().any(|t| !t.is_finite()) {
            return Err(EvalError::invalid("targets must be finite"));
        }
        if !self.directions.is_empty() && self.directions.len() != m {
            return Err(EvalError::DimensionMismatch {
                context: "target directions",
                expected: m,
                found: self.directions.len(),
            });
        }
        let (a, b) = self.alpha_beta();
        for (name, v) in [("weights", self.weights()), ("alpha", a), ("beta", b)] {
            if v.len() != m {
                return Err(EvalError::invalid(format!("{name} has {} entries for {m} targets", v.len())));
            }
            if v.iter().any(|x| !(x.is_finite() && *x > 0.0)) {
                return Err(EvalError::invalid(format!("{name} must be positive")));
            }
        }
        Ok(())
    }

    /// Targets in the maximization frame.
    pub fn framed_targets(&self) -> Vec<f64> {
        (0..self.len()).map(|i| self.direction(i).sign() * self.targets[i]).collect()
    }

    fn check(&self, p: &[f64]) -> Result<()> {
        self.validate()?;
        if p.len() != self.len() {
            return Err(EvalError::DimensionMismatch {
                context: "performance vs targets",
                expected: self.len(),
                found: p.len(),
            });
        }
        if p.iter().any(|v| !v.is_finite()) {
            return Err(EvalError::invalid("performance values must be finite"));
        }
        Ok(())
    }

    /// Per-objective achievement ratios `s_i` (raw `p/t`, or `t/p` when minimized),
    /// with `ds_i/dp_i` in the maximization frame.
    fn ratios(&self, p: &[f64]) -> Result<Vec<(f64, f64)>> {
        self.check(p)?;
        (0..self.len())
            .map(|i| {
                let t = self.targets[i];
                if t <= 0.0 {
                    return Err(EvalError::invalid(format!("target {i} must be positive, got {t}")));
                }
                let raw = self.direction(i).sign() * p[i];
                if raw < 0.0 {
                    return Err(EvalError::invalid(format!("objective {i} is negative ({raw})")));
                }
                Ok(match self.direction(i) {
                    ObjectiveDirection::Maximize => (raw / t, 1.0 / t),
                    ObjectiveDirection::Minimize if raw == 0.0 => (f64::INFINITY, 0.0),
                    ObjectiveDirection::Minimize => (t / raw, t / (raw * raw)),
                })
            })
            .collect()
    }
}

/// All targets met (boundary counts as met).
pub fn target_achievement(p: &[f64], spec: &TargetSpec) -> Result<bool> {
    spec.check(p)?;
    Ok(p.iter().zip(spec.framed_targets()).all(|(v, t)| *v >= t))
}

pub fn target_achievement_rate(p: &[f64], spec: &TargetSpec) -> Result<f64> {
    spec.check(p)?;
    let w = spec.weights();
    let met: f64 = p
        .iter()
        .zip(spec.framed_targets())
        .zip(&w)
        .filter(|((v, t), _)| **v >= *t)
        .map(|(_, w)| w)
        .sum();
    Ok(met / w.iter().sum::<f64>())
}

/// Signed distance to the target orthant, positive inside.
pub fn signed_distance_to_target(p: &[f64], spec: &TargetSpec) -> Result<f64> {
    spec.check(p)?;
    let margins: Vec<f64> = p.iter().zip(spec.framed_targets()).map(|(v, t)| v - t).collect();
    if margins.iter().all(|m| *m >= 0.0) {
        Ok(margins.iter().copied().fold(f64::INFINITY, f64::min))
    } else {
        Ok(-margins.iter().map(|m| m.min(0.0).powi(2)).sum::<f64>().sqrt())
    }
}

/// Smallest achievement ratio; at least 1 exactly when every target is met.
pub fn minimum_target_ratio(p: &[f64], spec: &TargetSpec) -> Result<f64> {
    Ok(spec.ratios(p)?.iter().map(|(s, _)| *s).fold(f64::INFINITY, f64::min))
}

/// Reward cap that makes the per-objective score C¹ at `s = 1`.
pub fn dtai_reward_cap(alpha: f64, beta: f64) -> f64 {
    alpha * (-alpha).exp() / (beta * -(-alpha).exp_m1())
}

/// Per-objective score and its derivative in `s`.
fn dtai_score(s: f64, alpha: f64, beta: f64) -> (f64, f64) {
    let denom = -(-alpha).exp_m1();
    if s <= 1.0 {
        (-(-alpha * s).exp_m1() / denom, alpha * (-alpha * s).exp() / denom)
    } else {
        let r = dtai_reward_cap(alpha, beta);
        if s.is_infinite() {
            return (1.0 + r, 0.0);
        }
        (1.0 - r * (-beta * (s - 1.0)).exp_m1(), r * beta * (-beta * (s - 1.0)).exp())
    }
}

/// Design target achievement index and its gradient in the maximization frame.
pub fn dtai_with_gradient(p: &[f64], spec: &TargetSpec) -> Result<(f64, Vec<f64>)> {
    let ratios = spec.ratios(p)?;
    let w = spec.weights();
    let (alpha, beta) = spec.alpha_beta();
    let norm: f64 = (0..p.len())
        .map(|i| w[i] * (1.0 + dtai_reward_cap(alpha[i], beta[i])))
        .sum();
    let mut value = 0.0;
    let mut grad = Vec::with_capacity(p.len());
    for (i, (s, ds)) in ratios.into_iter().enumerate() {
        let (g, dg) = dtai_score(s, alpha[i], beta[i]);
        value += w[i] * g;
        grad.push(w[i] * dg * ds / norm);
    }
    Ok((value / norm, grad))
}

pub fn dtai(p: &[f64], spec: &TargetSpec) -> Result<f64> {
    Ok(dtai_with_gradient(p, spec)?.0)
}
