//! Metric taxonomy: requirement codes, point/set and unary/binary
//! classification, bounds and optimal direction for every metric the crate
//! computes. The report uses this table for the `direction` field, and the
//! CLI uses the requirement codes to validate configs before running.

use std::fmt;

use serde::{Deserialize, Serialize};

/// What a metric needs beyond a plain numeric sample set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Requirement {
    /// Auxiliary predictive task and its training data.
    Aux,
    /// Clustering method.
    CL,
    /// Closed-form constraints (signed distance functions).
    CFC,
    /// Condition parameter calculation.
    Cond,
    /// Constraint violation test.
    Const,
    /// Distance metric.
    Dist,
    /// Differentiable design performance.
    DP,
    /// Vector embedding.
    Emb,
    /// Dataset of invalid designs.
    Inv,
    /// Design performance values.
    Perf,
}

impl Requirement {
    pub fn code(self) -> &'static str {
        match self {
            Requirement::Aux => "Aux",
            Requirement::CL => "CL",
            Requirement::CFC => "CFC",
            Requirement::Cond => "Cond",
            Requirement::Const => "Const",
            Requirement::Dist => "Dist",
            Requirement::DP => "DP",
            Requirement::Emb => "Emb",
            Requirement::Inv => "Inv",
            Requirement::Perf => "Perf",
        }
    }

    pub fn description(self) -> &'static str {
        match self {
            Requirement::Aux => "auxiliary predictive task and training data",
            Requirement::CL => "clustering method",
            Requirement::CFC => "closed-form constraints",
            Requirement::Cond => "condition parameter calculation",
            Requirement::Const => "constraint violation test",
            Requirement::Dist => "distance metric",
            Requirement::DP => "differentiable design performance",
            Requirement::Emb => "vector embedding",
            Requirement::Inv => "dataset of invalid designs",
            Requirement::Perf => "design performance values",
        }
    }
}

impl fmt::Display for Requirement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Direction {
    Maximize,
    Minimize,
    #[serde(rename = "n/a")]
    NotApplicable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Family {
    Similarity,
    Exploration,
    Constraints,
    Quality,
    Conditioning,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scope {
    Point,
    Set,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Arity {
    Unary,
    Binary,
}

#[derive(Debug, Clone, Copy)]
pub struct MetricInfo {
    pub name: &'static str,
    pub family: Family,
    pub scope: Scope,
    pub arity: Arity,
    pub requirements: &'static [Requirement],
    pub bounds: &'static str,
    pub direction: Direction,
}

use Arity::*;
use Direction::*;
use Family::*;
use Requirement as R;
use Scope::*;

const fn info(
    name: &'static str,
    family: Family,
    scope: Scope,
    arity: Arity,
    requirements: &'static [Requirement],
    bounds: &'static str,
    direction: Direction,
) -> MetricInfo {
    MetricInfo {
        name,
        family,
        scope,
        arity,
        requirements,
        bounds,
        direction,
    }
}

pub const CATALOG: &[MetricInfo] = &[
    info("mmd", Similarity, Set, Binary, &[R::Dist], "[0,inf)", Minimize),
    info("pr_curve", Similarity, Set, Binary, &[R::Emb, R::CL], "n/a", NotApplicable),
    info("f1", Similarity, Set, Binary, &[R::Emb, R::CL], "[0,1]", Maximize),
    info("precision_f0.1", Similarity, Set, Binary, &[R::Emb, R::CL], "[0,1]", Maximize),
    info("recall_f10", Similarity, Set, Binary, &[R::Emb, R::CL], "[0,1]", Maximize),
    info("pr_auc", Similarity, Set, Binary, &[R::Emb, R::CL], "[0,1]", Maximize),
    info("nearest_datapoint", Similarity, Point, Binary, &[R::Dist], "[0,inf)", Minimize),
    info("nearest_generated_sample", Similarity, Set, Binary, &[R::Dist], "[0,inf)", Minimize),
    info("rediscovery", Similarity, Set, Binary, &[R::Dist], "[0,inf)", Minimize),
    info("ml_efficacy", Similarity, Set, Binary, &[R::Aux], "(-inf,1]", Maximize),
    info("inter_sample_distance", Exploration, Point, Unary, &[R::Dist], "[0,inf)", Maximize),
    info("novelty_nearest_datapoint", Exploration, Point, Binary, &[R::Dist], "[0,inf)", Maximize),
    info("distance_to_centroid", Exploration, Point, Unary, &[R::Emb], "[0,inf)", Maximize),
    info("entropy", Exploration, Set, Unary, &[R::Emb], "[0,inf)", Maximize),
    info("dpp_diversity", Exploration, Set, Unary, &[R::Dist], "(-inf,0]", Maximize),
    info("smallest_enclosing_hypersphere", Exploration, Set, Unary, &[R::Emb], "[0,inf)", Maximize),
    info("convex_hull", Exploration, Set, Unary, &[R::Emb], "[0,inf)", Maximize),
    info("constraint_satisfaction", Constraints, Point, Unary, &[R::Const], "{0,1}", Maximize),
    info("constraint_satisfaction_rate", Constraints, Point, Unary, &[R::Const], "[0,1]", Maximize),
    info("signed_distance_to_constraints", Constraints, Point, Unary, &[R::CFC], "(-inf,inf)", Maximize),
    info("predicted_constraint_satisfaction", Constraints, Point, Unary, &[R::Inv, R::Aux], "[0,1]", Maximize),
    info("nearest_invalid_datapoint", Constraints, Point, Binary, &[R::Inv, R::Dist], "[0,inf)", Maximize),
    info("hypervolume", Quality, Set, Unary, &[R::Perf], "[0,inf)", Maximize),
    info("generational_distance", Quality, Point, Binary, &[R::Perf], "[0,inf)", Minimize),
    info("optimality_gap", Quality, Point, Unary, &[R::DP], "[0,inf)", Minimize),
    info("target_achievement", Quality, Point, Unary, &[R::Perf], "{0,1}", Maximize),
    info("target_achievement_rate", Quality, Point, Unary, &[R::Perf], "[0,1]", Maximize),
    info("signed_distance_to_target", Quality, Point, Unary, &[R::Perf], "(-inf,inf)", Maximize),
    info("minimum_target_ratio", Quality, Point, Unary, &[R::Perf], "[0,inf)", Maximize),
    info("dtai", Quality, Point, Unary, &[R::Perf], "[0,1]", Maximize),
    info("conditioning_adherence", Conditioning, Point, Unary, &[R::Cond], "[0,inf)", Minimize),
    info("conditioning_reconstruction", Conditioning, Point, Binary, &[R::Aux], "[0,inf)", Minimize),
];

pub fn lookup(name: &str) -> Option<&'static MetricInfo> {
    CATALOG.iter().find(|m| m.name == name)
}

pub fn direction_of(name: &str) -> Direction {
    lookup(name).map(|m| m.direction).unwrap_or(NotApplicable)
}
