use std::cmp::Ordering;

use crate::distance::{nearest_distances, DistanceSpec};
use crate::error::{EvalError, Result};
use crate::matrix::Matrix;

/// `a` weakly dominates `b` with a strict improvement somewhere (maximization).
pub fn dominates(a: &[f64], b: &[f64]) -> bool {
    let mut strict = false;
    for (x, y) in a.iter().zip(b) {
        if x < y {
            return false;
        }
        strict |= x > y;
    }
    strict
}

fn lex_desc(a: &[f64], b: &[f64]) -> Ordering {
    a.iter()
        .zip(b)
        .map(|(x, y)| y.total_cmp(x))
        .find(|o| o.is_ne())
        .unwrap_or(Ordering::Equal)
}

/// Indices (ascending) of non-dominated rows. Duplicates are all kept.
pub fn pareto_front(p: &Matrix) -> Vec<usize> {
    let mut order: Vec<usize> = (0..p.nrows()).collect();
    // A dominator is lexicographically larger, so it is always seen first.
    order.sort_by(|&a, &b| lex_desc(p.row(a), p.row(b)).then(a.cmp(&b)));
    let mut front: Vec<usize> = Vec::new();
    for i in order {
        if !front.iter().any(|&f| dominates(p.row(f), p.row(i))) {
            front.push(i);
        }
    }
    front.sort_unstable();
    front
}

/// Maximization-framed reference set for generational distance.
#[derive(Debug, Clone, PartialEq)]
pub struct ParetoRef {
    points: Matrix,
}

impl ParetoRef {
    pub fn new(points: Matrix) -> Result<Self> {
        if points.is_empty() {
            return Err(EvalError::Empty("Pareto reference set"));
        }
        if !points.all_finite() {
            return Err(EvalError::invalid("Pareto reference set has non-finite values"));
        }
        Ok(ParetoRef { points })
    }

    /// The non-dominated rows of `p`.
    pub fn from_front(p: &Matrix) -> Result<Self> {
        Self::new(p.select_rows(&pareto_front(p)))
    }

    pub fn points(&self) -> &Matrix {
        &self.points
    }
}

/// Per-point distance from `p` to the nearest reference point, in performance space.
pub fn generational_distance(p: &Matrix, reference: &ParetoRef, spec: &DistanceSpec) -> Result<Vec<f64>> {
    if p.is_empty() {
        return Err(EvalError::Empty("generated performance set"));
    }
    nearest_distances(p, &reference.points, spec)
}
