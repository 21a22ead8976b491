//! Conditioning metrics and conditional/marginal reference sets.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::catalog::direction_of;
use crate::data::DesignSet;
use crate::distance::{squared_euclidean, DistanceSpec};
use crate::error::{EvalError, Result};
use crate::matrix::Matrix;
use crate::report::MetricEntry;
use crate::seed::RunSeed;
use crate::similarity::knn_regress;

fn default_fraction() -> f64 {
    0.1
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionQuery {
    pub target: Vec<f64>,
    /// Share of the dataset kept as the conditional prior.
    #[serde(default = "default_fraction")]
    pub fraction: f64,
    #[serde(default)]
    pub distance: DistanceSpec,
    /// Keep exactly the rows whose condition equals `target` (class conditions).
    #[serde(default)]
    pub exact: bool,
}

impl ConditionQuery {
    pub fn new(target: Vec<f64>) -> Self {
        ConditionQuery {
            target,
            fraction: default_fraction(),
            distance: DistanceSpec::Euclidean,
            exact: false,
        }
    }

    pub fn with_fraction(mut self, fraction: f64) -> Self {
        self.fraction = fraction;
        self
    }

    pub fn exact(mut self) -> Self {
        self.exact = true;
        self
    }

    /// Compact label such as `0.3` or `0.3,1`.
    pub fn label(&self) -> String {
        self.target.iter().map(|v| v.to_string()).collect::<Vec<_>>().join(",")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum PriorMode {
    #[default]
    Conditional,
    Marginal,
}

impl PriorMode {
    pub fn name(self) -> &'static str {
        match self {
            PriorMode::Conditional => "conditional",
            PriorMode::Marginal => "marginal",
        }
    }
}

/// Per-sample squared errors; samples whose condition could not be computed
/// are `None` and left out of the mean.
#[derive(Debug, Clone, PartialEq)]
pub struct Adherence {
    pub per_point: Vec<Option<f64>>,
    pub mean: f64,
    pub failed: usize,
}

pub fn conditioning_adherence<F>(x: &Matrix, query: &ConditionQuery, cond_fn: &F) -> Result<Adherence>
where
    F: Fn(&[f64]) -> std::result::Result<Vec<f64>, String> + Sync,
{
    if x.is_empty() {
        return Err(EvalError::Empty("generated set"));
    }
    let target = &query.target;
    let per_point: Vec<Option<f64>> = (0..x.nrows())
        .into_par_iter()
        .map(|i| {
            cond_fn(x.row(i))
                .ok()
                .filter(|c| c.len() == target.len() && c.iter().all(|v| v.is_finite()))
                .map(|c| squared_euclidean(&c, target))
        })
        .collect();
    let known: Vec<f64> = per_point.iter().flatten().copied().collect();
    if known.is_empty() {
        return Err(EvalError::invalid("condition function failed on every sample"));
    }
    Ok(Adherence {
        mean: known.iter().sum::<f64>() / known.len() as f64,
        failed: per_point.len() - known.len(),
        per_point,
    })
}

/// Squared error of precomputed conditions against the target.
pub fn adherence_from_conditions(conditions: &Matrix, query: &ConditionQuery) -> Result<Vec<f64>> {
    conditions.ensure_cols(query.target.len(), "condition target")?;
    Ok(conditions.rows().map(|c| squared_euclidean(c, &query.target)).collect())
}

/// Squared error between KNN-regressed conditions and the target.
pub fn conditioning_reconstruction(
    x: &Matrix,
    query: &ConditionQuery,
    data: &Matrix,
    data_conditions: &Matrix,
    k: usize,
    spec: &DistanceSpec,
) -> Result<Vec<f64>> {
    data_conditions.ensure_cols(query.target.len(), "condition target")?;
    let pred = knn_regress(data, data_conditions, x, k, spec)?;
    Ok(pred.rows().map(|c| squared_euclidean(c, &query.target)).collect())
}

/// Rows of the dataset whose conditions lie closest to the query target.
pub fn conditional_prior(data: &DesignSet, query: &ConditionQuery) -> Result<DesignSet> {
    let conds = data.require_conditions("conditional_prior")?;
    conds.ensure_cols(query.target.len(), "condition target")?;
    if query.exact {
        let rows: Vec<usize> = (0..data.len()).filter(|&i| conds.row(i) == query.target.as_slice()).collect();
        if rows.is_empty() {
            return Err(EvalError::invalid(format!("no datapoint has condition {}", query.label())));
        }
        return data.select(&rows);
    }
    if !(query.fraction > 0.0 && query.fraction <= 1.0) {
        return Err(EvalError::invalid(format!("fraction {} outside (0, 1]", query.fraction)));
    }
    let keep = ((query.fraction * data.len() as f64) - 1e-9).ceil().max(1.0) as usize;
    let dist: Vec<f64> = conds.rows().map(|c| query.distance.eval(c, &query.target)).collect();
    let mut order: Vec<usize> = (0..data.len()).collect();
    order.sort_by(|&a, &b| dist[a].total_cmp(&dist[b]));
    let mut rows = order[..keep.min(order.len())].to_vec();
    rows.sort_unstable();
    data.select(&rows)
}

/// Report key for a metric evaluated against a prior, e.g. `mmd[conditional@0.3]`.
pub fn conditional_name(metric: &str, mode: PriorMode, query: &ConditionQuery) -> String {
    format!("{metric}[{}@{}]", mode.name(), query.label())
}

/// Evaluate a binary metric against the conditional prior or the full dataset.
pub fn conditional_metric<F>(
    metric: &str,
    eval: F,
    data: &DesignSet,
    query: &ConditionQuery,
    mode: PriorMode,
) -> (String, Result<MetricEntry>)
where
    F: Fn(&DesignSet) -> Result<MetricEntry>,
{
    let name = conditional_name(metric, mode, query);
    let entry = match mode {
        PriorMode::Marginal => eval(data),
        PriorMode::Conditional => conditional_prior(data, query).and_then(|prior| eval(&prior)),
    };
    let entry = entry.map(|e| {
        e.with_setting("prior", mode.name())
            .with_setting("condition", query.target.clone())
            .with_setting("fraction", query.fraction)
    });
    (name, entry)
}

/// Weighted average of a metric over several condition queries (uniform by default).
pub fn conditional_sweep<F>(
    metric: &str,
    eval: F,
    data: &DesignSet,
    queries: &[ConditionQuery],
    weights: Option<&[f64]>,
    mode: PriorMode,
    seed: RunSeed,
) -> (String, Result<MetricEntry>)
where
    F: Fn(&DesignSet) -> Result<MetricEntry>,
{
    let name = format!("{metric}[{}@sweep]", mode.name());
    let run = || -> Result<MetricEntry> {
        if queries.is_empty() {
            return Err(EvalError::Empty("condition sweep"));
        }
        let w: Vec<f64> = weights.map_or_else(|| vec![1.0; queries.len()], <[f64]>::to_vec);
        if w.len() != queries.len() || w.iter().any(|v| !(v.is_finite() && *v >= 0.0)) || w.iter().sum::<f64>() <= 0.0 {
            return Err(EvalError::invalid("sweep weights must be non-negative, one per query, not all zero"));
        }
        let mut total = 0.0;
        let mut values = Vec::with_capacity(queries.len());
        for (q, wi) in queries.iter().zip(&w) {
            let v = conditional_metric(metric, &eval, data, q, mode)
                .1?
                .value
                .ok_or_else(|| EvalError::invalid("inner metric produced no value"))?;
            total += wi * v;
            values.push(v);
        }
        let targets: Vec<Vec<f64>> = queries.iter().map(|q| q.target.clone()).collect();
        Ok(MetricEntry::scalar(total / w.iter().sum::<f64>(), direction_of(metric), seed)
            .with_setting("prior", mode.name())
            .with_setting("conditions", serde_json::to_value(targets)?)
            .with_setting("weights", w)
            .with_setting("values", values))
    };
    (name, run())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn scalar_conditions() -> DesignSet {
        let rows: Vec<[f64; 1]> = (1..=10).map(|i| [i as f64]).collect();
        let conds = Matrix::from_rows(&(1..=10).map(|i| [i as f64 / 10.0]).collect::<Vec<_>>()).unwrap();
        DesignSet::from_rows(&rows).unwrap().with_conditions(conds).unwrap()
    }

    #[test]
    fn adherence_values() {
        let x = Matrix::from_rows(&[[0.28], [0.32]]).unwrap();
        let q = ConditionQuery::new(vec![0.3]);
        let id = |v: &[f64]| Ok(v.to_vec());
        let a = conditioning_adherence(&x, &q, &id).unwrap();
        assert!((a.mean - 0.0004).abs() < 1e-12);
        let single = conditioning_adherence(&Matrix::from_rows(&[[0.4]]).unwrap(), &q, &id).unwrap();
        assert!((single.mean - 0.01).abs() < 1e-12);
        let flaky = |v: &[f64]| if v[0] > 0.3 { Err("no solution".to_string()) } else { Ok(vec![0.3]) };
        let a = conditioning_adherence(&x, &q, &flaky).unwrap();
        assert_eq!((a.mean, a.failed), (0.0, 1));
    }

    #[test]
    fn prior_selection() {
        let data = scalar_conditions();
        assert_eq!(conditional_prior(&data, &ConditionQuery::new(vec![0.3]).with_fraction(1.0)).unwrap(), data);
        let one = conditional_prior(&data, &ConditionQuery::new(vec![0.3])).unwrap();
        assert_eq!(one.designs().as_slice(), &[3.0]);
        let two = conditional_prior(&data, &ConditionQuery::new(vec![0.3]).with_fraction(0.2)).unwrap();
        assert_eq!(two.len(), 2);
        assert_eq!(two.designs().row(0), &[2.0]);
        let exact = conditional_prior(&data, &ConditionQuery::new(vec![0.5]).exact()).unwrap();
        assert_eq!(exact.designs().as_slice(), &[5.0]);
        let bare = DesignSet::from_rows(&[[1.0]]).unwrap();
        let err = conditional_prior(&bare, &ConditionQuery::new(vec![0.5])).unwrap_err();
        assert!(err.to_string().contains("Cond"));
    }

    #[test]
    fn reconstruction_brute_force() {
        let data = Matrix::from_rows(&[[0.0], [1.0], [2.0], [4.0]]).unwrap();
        let conds = Matrix::from_rows(&[[0.0], [0.2], [0.4], [0.8]]).unwrap();
        let x = Matrix::from_rows(&[[1.2], [3.9]]).unwrap();
        let q = ConditionQuery::new(vec![0.3]);
        let r = conditioning_reconstruction(&x, &q, &data, &conds, 2, &DistanceSpec::Euclidean).unwrap();
        // neighbours {1,2} -> 0.3; {4,2} -> 0.6
        assert!(r[0].abs() < 1e-15);
        assert!((r[1] - 0.09).abs() < 1e-12);
        assert!(conditioning_reconstruction(&x, &q, &data, &conds, 5, &DistanceSpec::Euclidean).is_err());
    }

    #[test]
    fn marginal_and_sweep_dispatch() {
        let data = scalar_conditions();
        let count = |d: &DesignSet| Ok(MetricEntry::scalar(d.len() as f64, direction_of("mmd"), RunSeed(0)));
        let q = ConditionQuery::new(vec![0.3]).with_fraction(0.2);
        let (name, e) = conditional_metric("mmd", count, &data, &q, PriorMode::Marginal);
        assert_eq!(name, "mmd[marginal@0.3]");
        assert_eq!(e.unwrap().value, Some(10.0));
        let (name, e) = conditional_metric("mmd", count, &data, &q, PriorMode::Conditional);
        assert_eq!(name, "mmd[conditional@0.3]");
        assert_eq!(e.unwrap().value, Some(2.0));
        let (_, s) = conditional_sweep("mmd", count, &data, std::slice::from_ref(&q), None, PriorMode::Conditional, RunSeed(0));
        assert_eq!(s.unwrap().value, Some(2.0));
        let qs = [q, ConditionQuery::new(vec![0.5]).with_fraction(0.5)];
        let (_, s) = conditional_sweep("mmd", count, &data, &qs, Some(&[3.0, 1.0]), PriorMode::Conditional, RunSeed(0));
        assert_eq!(s.unwrap().value, Some(2.75));
    }
}
