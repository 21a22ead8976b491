//! Constraint-satisfaction metrics.
//!
//! Constraints come either as black-box tests (which may fail to evaluate)
//! or as signed-distance functions, positive where the constraint holds.

use rayon::prelude::*;

use crate::catalog::Requirement;
use crate::distance::{nearest_distances, DistanceSpec, NeighborIndex};
use crate::error::{EvalError, Result};
use crate::matrix::Matrix;

pub type ConstraintTest = Box<dyn Fn(&[f64]) -> std::result::Result<bool, String> + Send + Sync>;
pub type SignedDistance = Box<dyn Fn(&[f64]) -> f64 + Send + Sync>;

#[derive(Default)]
pub struct ConstraintSet {
    tests: Vec<ConstraintTest>,
    sdfs: Vec<SignedDistance>,
    weights: Option<Vec<f64>>,
}

impl ConstraintSet {
    pub fn new() -> Self {
        Self::default()
    }

    /// Add a black-box test. Sets built this way have no signed distances.
    pub fn with_test(mut self, test: impl Fn(&[f64]) -> std::result::Result<bool, String> + Send + Sync + 'static) -> Self {
        self.tests.push(Box::new(test));
        self
    }

    /// Add a closed-form constraint; its test is `sdf(x) > 0`.
    pub fn with_sdf(mut self, sdf: impl Fn(&[f64]) -> f64 + Send + Sync + Clone + 'static) -> Self {
        let probe = sdf.clone();
        self.tests.push(Box::new(move |x| Ok(probe(x) > 0.0)));
        self.sdfs.push(Box::new(sdf));
        self
    }

    pub fn with_weights(mut self, weights: Vec<f64>) -> Result<Self> {
        if weights.iter().any(|w| !(w.is_finite() && *w > 0.0)) {
            return Err(EvalError::invalid("constraint weights must be positive"));
        }
        self.weights = Some(weights);
        Ok(self)
    }

    pub fn len(&self) -> usize {
        self.tests.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tests.is_empty()
    }

    /// Signed distances are available for every constraint.
    pub fn has_sdfs(&self) -> bool {
        !self.sdfs.is_empty() && self.sdfs.len() == self.tests.len()
    }

    /// Run every test on every row.
    pub fn evaluate(&self, x: &Matrix) -> Result<Evaluations> {
        if self.tests.is_empty() {
            return Err(EvalError::invalid("constraint set has no tests"));
        }
        if x.is_empty() {
            return Err(EvalError::Empty("generated set"));
        }
        let passes = (0..x.nrows())
            .into_par_iter()
            .map(|i| self.tests.iter().map(|t| t(x.row(i))).collect::<std::result::Result<Vec<bool>, _>>().ok())
            .collect();
        Evaluations::new(passes, self.weights.clone())
    }
}

/// Per-sample test outcomes. `None` marks a sample whose evaluation failed.
#[derive(Debug, Clone, PartialEq)]
pub struct Evaluations {
    passes: Vec<Option<Vec<bool>>>,
    weights: Vec<f64>,
}

/// Per-sample values with indeterminate samples left out of the mean.
#[derive(Debug, Clone, PartialEq)]
pub struct ConstraintOutcome {
    pub per_point: Vec<Option<f64>>,
    pub mean: f64,
    pub indeterminate: usize,
}

impl ConstraintOutcome {
    fn from_values(per_point: Vec<Option<f64>>) -> Result<Self> {
        let known: Vec<f64> = per_point.iter().flatten().copied().collect();
        if known.is_empty() {
            return Err(EvalError::invalid("no sample could be evaluated against the constraints"));
        }
        Ok(ConstraintOutcome {
            mean: known.iter().sum::<f64>() / known.len() as f64,
            indeterminate: per_point.len() - known.len(),
            per_point,
        })
    }
}

impl Evaluations {
    pub fn new(passes: Vec<Option<Vec<bool>>>, weights: Option<Vec<f64>>) -> Result<Self> {
        if passes.is_empty() {
            return Err(EvalError::Empty("generated set"));
        }
        let m = passes.iter().flatten().map(Vec::len).next().unwrap_or(0);
        if passes.iter().flatten().any(|p| p.len() != m) {
            return Err(EvalError::invalid("samples report different numbers of constraints"));
        }
        let weights = weights.unwrap_or_else(|| vec![1.0; m]);
        if weights.len() != m && m > 0 {
            return Err(EvalError::DimensionMismatch {
                context: "constraint weights",
                expected: m,
                found: weights.len(),
            });
        }
        Ok(Evaluations { passes, weights })
    }

    /// One constraint per column, satisfied where the signed distance is positive.
    pub fn from_sdf_columns(sdfs: &Matrix, weights: Option<Vec<f64>>) -> Result<Self> {
        Self::new(sdfs.rows().map(|r| Some(r.iter().map(|v| *v > 0.0).collect())).collect(), weights)
    }

    /// A single aggregate validity flag per sample.
    pub fn from_valid_flags(valid: &[bool]) -> Result<Self> {
        Self::new(valid.iter().map(|v| Some(vec![*v])).collect(), None)
    }

    pub fn passes(&self) -> &[Option<Vec<bool>>] {
        &self.passes
    }

    /// 1 where every constraint holds, else 0.
    pub fn satisfaction(&self) -> Result<ConstraintOutcome> {
        ConstraintOutcome::from_values(
            self.passes
                .iter()
                .map(|p| p.as_ref().map(|p| if p.iter().all(|&b| b) { 1.0 } else { 0.0 }))
                .collect(),
        )
    }

    /// Weighted fraction of constraints met per sample.
    pub fn rate(&self) -> Result<ConstraintOutcome> {
        let total: f64 = self.weights.iter().sum();
        ConstraintOutcome::from_values(
            self.passes
                .iter()
                .map(|p| {
                    p.as_ref().map(|p| {
                        p.iter().zip(&self.weights).filter(|(b, _)| **b).map(|(_, w)| w).sum::<f64>() / total
                    })
                })
                .collect(),
        )
    }
}

pub fn constraint_satisfaction(x: &Matrix, constraints: &ConstraintSet) -> Result<ConstraintOutcome> {
    constraints.evaluate(x)?.satisfaction()
}

pub fn constraint_satisfaction_rate(x: &Matrix, constraints: &ConstraintSet) -> Result<ConstraintOutcome> {
    constraints.evaluate(x)?.rate()
}

/// Binding (minimum) signed distance per sample.
pub fn signed_distance_to_constraints(x: &Matrix, constraints: &ConstraintSet) -> Result<Vec<f64>> {
    if !constraints.has_sdfs() {
        return Err(EvalError::missing("signed_distance_to_constraints", Requirement::CFC));
    }
    if x.is_empty() {
        return Err(EvalError::Empty("generated set"));
    }
    Ok((0..x.nrows())
        .into_par_iter()
        .map(|i| constraints.sdfs.iter().map(|f| f(x.row(i))).fold(f64::INFINITY, f64::min))
        .collect())
}

/// Row minimum of precomputed signed-distance columns.
pub fn binding_sdf(sdfs: &Matrix) -> Result<Vec<f64>> {
    if sdfs.ncols() == 0 {
        return Err(EvalError::missing("signed_distance_to_constraints", Requirement::CFC));
    }
    Ok(sdfs.rows().map(|r| r.iter().copied().fold(f64::INFINITY, f64::min)).collect())
}

/// Fraction of the `k` nearest labeled datapoints that are valid.
pub fn predicted_constraint_satisfaction(
    x: &Matrix,
    valid: &Matrix,
    invalid: &Matrix,
    k: usize,
    spec: &DistanceSpec,
) -> Result<Vec<f64>> {
    let pool = valid.vstack(invalid)?;
    if k == 0 || k > pool.nrows() {
        return Err(EvalError::invalid(format!(
            "K = {k} needs 1..={} labeled datapoints",
            pool.nrows()
        )));
    }
    x.ensure_cols(pool.ncols(), "predicted constraint satisfaction")?;
    let n_valid = valid.nrows();
    let index = NeighborIndex::new(&pool, *spec, x.nrows())?;
    Ok((0..x.nrows())
        .into_par_iter()
        .map(|i| {
            let hits = index.knn(x.row(i), k, None).iter().filter(|n| n.index < n_valid).count();
            hits as f64 / k as f64
        })
        .collect())
}

pub fn nearest_invalid_datapoint(x: &Matrix, invalid: &Matrix, spec: &DistanceSpec) -> Result<Vec<f64>> {
    if invalid.is_empty() {
        return Err(EvalError::missing("nearest_invalid_datapoint", Requirement::Inv));
    }
    nearest_distances(x, invalid, spec)
}
