use rayon::prelude::*;
use serde_json::Value;

use crate::catalog::{direction_of, Requirement};
use crate::conditioning::{
    adherence_from_conditions, conditional_metric, conditional_sweep, conditioning_adherence,
    conditioning_reconstruction, ConditionQuery,
};
use crate::constraints::{binding_sdf, Evaluations};
use crate::data::DesignSet;
use crate::distance::DistanceSpec;
use crate::error::{EvalError, Issue, Result};
use crate::exploration::{
    convex_hull_volume, distance_to_centroid, dpp_diversity, entropy, inter_sample_distance,
    smallest_enclosing_hypersphere,
};
use crate::matrix::Matrix;
use crate::quality::{
    dtai, generational_distance, hypervolume, minimum_target_ratio, optimality_gap, quantile_point,
    signed_distance_to_target, target_achievement, target_achievement_rate, ParetoRef, TargetSpec,
};
use crate::report::{MetricEntry, MetricReport};
use crate::seed::RunSeed;
use crate::similarity::{
    f_beta, ml_efficacy, mmd, nearest_datapoint, nearest_generated_sample, pr_auc, prd_curve, rediscovery, PrCurve,
};
use crate::synth::{kno1, kno1_front, RingProblem};

use super::config::{ConditioningConfig, MetricSpec, Problem, Scalarization};

/// Grid side used for the KNO1 reference front.
pub const KNO1_FRONT_GRID: usize = 300;

/// Everything a metric battery can draw on, already loaded and framed.
#[derive(Debug, Clone)]
pub struct EvalData {
    pub dataset: Option<DesignSet>,
    pub generated: DesignSet,
    pub invalid: Option<DesignSet>,
    pub heldout: Option<DesignSet>,
    /// Maximization-framed Pareto reference points.
    pub reference: Option<Matrix>,
    pub problem: Option<Problem>,
    pub targets: Option<TargetSpec>,
    pub conditioning: Option<ConditioningConfig>,
}

impl EvalData {
    pub fn new(generated: DesignSet) -> Self {
        EvalData {
            dataset: None,
            generated,
            invalid: None,
            heldout: None,
            reference: None,
            problem: None,
            targets: None,
            conditioning: None,
        }
    }

    fn ring(&self) -> Option<&RingProblem> {
        match &self.problem {
            Some(Problem::Ring(r)) => Some(r),
            _ => None,
        }
    }

    fn is_kno1(&self) -> bool {
        matches!(self.problem, Some(Problem::Kno1))
    }

    fn queries(&self) -> &[ConditionQuery] {
        self.conditioning.as_ref().map_or(&[], |c| c.queries.as_slice())
    }

    fn dataset(&self) -> Result<&DesignSet> {
        self.dataset.as_ref().ok_or_else(|| EvalError::Config("no dataset given".into()))
    }

    /// Known-valid and known-invalid designs from the dataset flags and the invalid set.
    fn labeled_pool(&self) -> Result<(Matrix, Matrix)> {
        let data = self.dataset()?;
        let (valid, mut invalid) = match data.valid() {
            Some(_) => data.split_by_validity("labeled pool")?,
            None => (Some(data.designs().clone()), None),
        };
        if let Some(extra) = &self.invalid {
            invalid = Some(match invalid {
                Some(m) => m.vstack(extra.designs())?,
                None => extra.designs().clone(),
            });
        }
        let dim = data.dim();
        Ok((
            valid.unwrap_or_else(|| Matrix::zeros(0, dim)),
            invalid.unwrap_or_else(|| Matrix::zeros(0, dim)),
        ))
    }

    fn has_invalid_examples(&self) -> bool {
        self.invalid.is_some() || self.dataset.as_ref().and_then(|d| d.valid()).is_some_and(|v| v.contains(&false))
    }
}

/// A finished battery: the report and the unconditional PR curve, if one was requested.
#[derive(Debug, Clone)]
pub struct Evaluation {
    pub report: MetricReport,
    pub pr_curve: Option<PrCurve>,
}

struct Outcome {
    entries: Vec<(String, Result<MetricEntry>)>,
    curve: Option<PrCurve>,
}

impl Outcome {
    fn single(name: &str, entry: Result<MetricEntry>) -> Self {
        Outcome {
            entries: vec![(name.to_string(), entry)],
            curve: None,
        }
    }
}

fn issue(metric: &str, requirement: Option<Requirement>, detail: impl Into<String>) -> Issue {
    Issue {
        metric: metric.to_string(),
        requirement,
        detail: detail.into(),
    }
}

fn check_distance(name: &str, spec: &DistanceSpec, sets: &[Option<&Matrix>], issues: &mut Vec<Issue>) {
    for m in sets.iter().flatten() {
        if let Err(e) = spec.validate(m) {
            issues.push(issue(name, Some(Requirement::Dist), e.to_string()));
            return;
        }
    }
}

/// Check every metric's requirements against the inputs. Nothing is computed.
pub fn validate(data: &EvalData, metrics: &[MetricSpec]) -> Result<()> {
    use MetricSpec::*;
    let mut issues = Vec::new();
    let gen = data.generated.designs();
    let ds = data.dataset.as_ref().map(DesignSet::designs);
    let gen_perf = data.generated.performance();
    let d = data.generated.dim();
    if let Some(ds) = ds {
        if ds.ncols() != d {
            issues.push(issue("inputs", None, format!("dataset has {} design columns, generated has {d}", ds.ncols())));
        }
    }
    for spec in metrics {
        let name = spec.name();
        let binary = matches!(
            spec,
            Mmd(_) | PrCurve(_) | F1(_) | PrecisionF01(_) | RecallF10(_) | PrAuc(_) | NearestDatapoint(_)
                | NearestGeneratedSample(_) | NoveltyNearestDatapoint(_) | MlEfficacy(_)
                | PredictedConstraintSatisfaction(_) | ConditioningReconstruction(_)
        );
        if binary && ds.is_none() {
            issues.push(issue(name, None, "needs a dataset"));
        }
        if !spec.priors().is_empty() {
            let has_conds = data.dataset.as_ref().is_some_and(|s| s.conditions().is_some());
            if !has_conds || data.queries().is_empty() {
                issues.push(issue(name, Some(Requirement::Cond), "prior modes need dataset conditions and condition queries"));
            }
        }
        match spec {
            Mmd(_) => {}
            PrCurve(c) | F1(c) | PrecisionF01(c) | RecallF10(c) | PrAuc(c) => {
                if c.clusters < 2 {
                    issues.push(issue(name, Some(Requirement::CL), "at least 2 clusters are needed"));
                }
            }
            NearestDatapoint(c) | NoveltyNearestDatapoint(c) => check_distance(name, &c.distance, &[Some(gen), ds], &mut issues),
            NearestGeneratedSample(c) => check_distance(name, &c.distance, &[Some(gen), ds], &mut issues),
            Rediscovery(c) => {
                if data.heldout.is_none() {
                    issues.push(issue(name, None, "needs a held-out set"));
                }
                check_distance(name, &c.distance, &[Some(gen), data.heldout.as_ref().map(DesignSet::designs)], &mut issues);
            }
            MlEfficacy(c) => {
                let real = data.heldout.as_ref().or(data.dataset.as_ref());
                if gen_perf.is_none() || real.and_then(DesignSet::performance).is_none() {
                    issues.push(issue(name, Some(Requirement::Aux), "needs performance labels on generated and real designs"));
                }
                check_distance(name, &c.distance, &[Some(gen)], &mut issues);
            }
            InterSampleDistance(c) => check_distance(name, &c.distance, &[Some(gen)], &mut issues),
            DistanceToCentroid(_) | Entropy(_) | DppDiversity(_) | SmallestEnclosingHypersphere(_) => {}
            ConvexHull(c) => {
                let k = c.embedding_dim.unwrap_or(d.min(3));
                if k == 0 || k > 3 || k > d {
                    issues.push(issue(
                        name,
                        Some(Requirement::Emb),
                        format!("cannot embed {d}-D designs into {k} dimensions (1 to 3 supported)"),
                    ));
                }
            }
            ConstraintSatisfaction(_) | ConstraintSatisfactionRate(_) => {
                let g = &data.generated;
                if data.ring().is_none() && g.sdfs().is_none() && g.valid().is_none() {
                    issues.push(issue(name, Some(Requirement::Const), "no constraint test: give a problem, sdf columns or a valid column"));
                }
            }
            SignedDistanceToConstraints(_) => {
                if data.ring().is_none() && data.generated.sdfs().is_none() {
                    issues.push(issue(name, Some(Requirement::CFC), "no signed-distance columns or closed-form problem"));
                }
            }
            PredictedConstraintSatisfaction(c) => {
                if !data.has_invalid_examples() {
                    issues.push(issue(name, Some(Requirement::Inv), "no invalid datapoints"));
                }
                check_distance(name, &c.distance, &[Some(gen), ds], &mut issues);
            }
            NearestInvalidDatapoint(c) => {
                if !data.has_invalid_examples() {
                    issues.push(issue(name, Some(Requirement::Inv), "no invalid datapoints"));
                }
                check_distance(name, &c.distance, &[Some(gen)], &mut issues);
            }
            Hypervolume(c) => {
                if gen_perf.is_none() {
                    issues.push(issue(name, Some(Requirement::Perf), "generated set has no performance columns"));
                }
                let data_perf = data.dataset.as_ref().and_then(DesignSet::performance).is_some();
                if c.reference.is_none() && !data_perf {
                    issues.push(issue(name, Some(Requirement::Perf), "needs a reference point or dataset performance"));
                }
            }
            GenerationalDistance(c) => {
                if gen_perf.is_none() {
                    issues.push(issue(name, Some(Requirement::Perf), "generated set has no performance columns"));
                }
                let data_perf = data.dataset.as_ref().and_then(DesignSet::performance).is_some();
                if data.reference.is_none() && !data.is_kno1() && !data_perf {
                    issues.push(issue(name, Some(Requirement::Perf), "no Pareto reference set"));
                }
                check_distance(name, &c.distance, &[gen_perf], &mut issues);
            }
            OptimalityGap(c) => {
                if !data.is_kno1() || d != 2 {
                    issues.push(issue(name, Some(Requirement::DP), "needs a differentiable performance model (problem kno1)"));
                }
                match &c.scalarization {
                    Scalarization::Dtai if data.targets.is_none() => {
                        issues.push(issue(name, Some(Requirement::Perf), "DTAI scalarization needs targets"))
                    }
                    Scalarization::WeightedSum { weights } if weights.len() != 2 => {
                        issues.push(issue(name, None, "weighted sum needs one weight per objective"))
                    }
                    _ => {}
                }
            }
            TargetAchievement(_) | TargetAchievementRate(_) | SignedDistanceToTarget(_) | MinimumTargetRatio(_) | Dtai(_) => {
                match (gen_perf, &data.targets) {
                    (None, _) => issues.push(issue(name, Some(Requirement::Perf), "generated set has no performance columns")),
                    (_, None) => issues.push(issue(name, Some(Requirement::Perf), "no performance targets")),
                    (Some(p), Some(t)) => {
                        if let Err(e) = t.validate() {
                            issues.push(issue(name, Some(Requirement::Perf), e.to_string()));
                        } else if t.len() != p.ncols() {
                            issues.push(issue(name, Some(Requirement::Perf), format!("{} targets for {} objectives", t.len(), p.ncols())));
                        }
                    }
                }
            }
            ConditioningAdherence(_) => {
                let computable = data.generated.conditions().is_some() || matches!(data.problem, Some(Problem::Sixmode(_)));
                if data.queries().is_empty() || !computable {
                    issues.push(issue(name, Some(Requirement::Cond), "needs condition queries and generated conditions"));
                }
            }
            ConditioningReconstruction(c) => {
                let has = data.dataset.as_ref().is_some_and(|s| s.conditions().is_some());
                if data.queries().is_empty() || !has {
                    issues.push(issue(name, Some(Requirement::Cond), "needs condition queries and dataset conditions"));
                }
                check_distance(name, &c.distance, &[Some(gen), ds], &mut issues);
            }
        }
    }
    if issues.is_empty() {
        Ok(())
    } else {
        Err(EvalError::Validation { issues })
    }
}

/// Validate, then run every metric. Metrics run in parallel; the report
/// keeps the configured order.
pub fn evaluate(data: &EvalData, metrics: &[MetricSpec], seed: RunSeed) -> Result<Evaluation> {
    validate(data, metrics)?;
    let outcomes: Vec<Outcome> = metrics
        .par_iter()
        .enumerate()
        .map(|(i, spec)| run_metric(data, spec, seed.derive(i as u64)))
        .collect();
    let mut report = MetricReport::new();
    let mut pr_curve = None;
    for (i, (spec, outcome)) in metrics.iter().zip(outcomes).enumerate() {
        let metric_seed = seed.derive(i as u64);
        for (name, entry) in outcome.entries {
            let entry = entry.map(|e| with_settings(e, spec));
            report.record(name, spec.name(), metric_seed, entry);
        }
        if pr_curve.is_none() {
            pr_curve = outcome.curve;
        }
    }
    Ok(Evaluation { report, pr_curve })
}

fn with_settings(mut entry: MetricEntry, spec: &MetricSpec) -> MetricEntry {
    for (k, v) in spec.settings() {
        entry.settings.entry(k).or_insert(v);
    }
    entry
}

fn per_point(name: &str, values: Vec<f64>, seed: RunSeed) -> MetricEntry {
    MetricEntry::per_point(values, direction_of(name), seed)
}

fn scalar(name: &str, value: f64, seed: RunSeed) -> MetricEntry {
    MetricEntry::scalar(value, direction_of(name), seed)
}

/// Unconditional entry plus one entry per requested prior mode.
fn with_priors<F>(data: &EvalData, spec: &MetricSpec, seed: RunSeed, eval: F) -> Vec<(String, Result<MetricEntry>)>
where
    F: Fn(&DesignSet) -> Result<MetricEntry>,
{
    let name = spec.name();
    let mut out = vec![(name.to_string(), data.dataset().and_then(&eval))];
    let Ok(dataset) = data.dataset() else {
        return out;
    };
    let Some(cond) = &data.conditioning else {
        return out;
    };
    for &mode in spec.priors() {
        out.push(match cond.queries.as_slice() {
            [q] => conditional_metric(name, &eval, dataset, q, mode),
            qs => conditional_sweep(name, &eval, dataset, qs, cond.weights.as_deref(), mode, seed),
        });
    }
    out
}

fn generated_perf<'a>(data: &'a EvalData, metric: &str) -> Result<&'a Matrix> {
    data.generated.require_performance(metric)
}

fn per_target<F>(data: &EvalData, name: &str, seed: RunSeed, f: F) -> Result<MetricEntry>
where
    F: Fn(&[f64], &TargetSpec) -> Result<f64>,
{
    let p = generated_perf(data, name)?;
    let t = data.targets.as_ref().ok_or_else(|| EvalError::missing(name, Requirement::Perf))?;
    let values = p.rows().map(|r| f(r, t)).collect::<Result<Vec<_>>>()?;
    Ok(per_point(name, values, seed))
}

/// One entry per condition query; a lone query keeps the plain metric name.
fn per_query<F>(name: &str, queries: &[ConditionQuery], f: F) -> Vec<(String, Result<MetricEntry>)>
where
    F: Fn(&ConditionQuery) -> Result<MetricEntry>,
{
    match queries {
        [q] => vec![(name.to_string(), f(q).map(|e| e.with_setting("condition", q.target.clone())))],
        qs => qs
            .iter()
            .map(|q| (format!("{name}@{}", q.label()), f(q).map(|e| e.with_setting("condition", q.target.clone()))))
            .collect(),
    }
}

fn constraint_evaluations(data: &EvalData, name: &str, weights: Option<Vec<f64>>) -> Result<Evaluations> {
    let g = &data.generated;
    if let Some(ring) = data.ring() {
        let sdfs: Vec<[f64; 2]> = g.designs().rows().map(|r| ring.constraint_sdfs(r)).collect();
        return Evaluations::from_sdf_columns(&Matrix::from_rows(&sdfs)?, weights);
    }
    if let Some(s) = g.sdfs() {
        return Evaluations::from_sdf_columns(s, weights);
    }
    if let Some(v) = g.valid() {
        if weights.is_some() {
            return Err(EvalError::invalid("constraint weights need per-constraint sdf columns"));
        }
        return Evaluations::from_valid_flags(v);
    }
    Err(EvalError::missing(name, Requirement::Const))
}

fn run_metric(data: &EvalData, spec: &MetricSpec, seed: RunSeed) -> Outcome {
    use MetricSpec::*;
    let name = spec.name();
    let gen = data.generated.designs();
    match spec {
        Mmd(c) => Outcome {
            entries: with_priors(data, spec, seed, |reference| {
                let r = mmd(reference.designs(), gen, c.bandwidth, c.estimator, seed)?;
                Ok(scalar(name, r.value, seed).with_setting("sigma", r.sigma))
            }),
            curve: None,
        },
        PrCurve(c) | F1(c) | PrecisionF01(c) | RecallF10(c) | PrAuc(c) => {
            let summarize = |curve: &crate::similarity::PrCurve| match spec {
                F1(_) => f_beta(curve, 1.0),
                PrecisionF01(_) => f_beta(curve, 0.1),
                RecallF10(_) => f_beta(curve, 10.0),
                _ => pr_auc(curve),
            };
            let curve = match spec {
                PrCurve(_) => data.dataset().and_then(|d| prd_curve(d.designs(), gen, c.settings(), seed)).ok(),
                _ => None,
            };
            let entries = with_priors(data, spec, seed, |reference| {
                let curve = prd_curve(reference.designs(), gen, c.settings(), seed)?;
                Ok(scalar(name, summarize(&curve), seed).with_setting("cluster_count", curve.cluster_count))
            });
            Outcome { entries, curve }
        }
        NearestDatapoint(c) | NoveltyNearestDatapoint(c) => Outcome {
            entries: with_priors(data, spec, seed, |reference| {
                Ok(per_point(name, nearest_datapoint(gen, reference.designs(), &c.distance)?, seed))
            }),
            curve: None,
        },
        NearestGeneratedSample(c) => Outcome {
            entries: with_priors(data, spec, seed, |reference| {
                let budget = c.budget.unwrap_or(gen.nrows().min(reference.len()));
                let v = nearest_generated_sample(reference.designs(), gen, budget, &c.distance, seed)?;
                Ok(per_point(name, v, seed).with_setting("budget", budget))
            }),
            curve: None,
        },
        Rediscovery(c) => Outcome::single(
            name,
            (|| {
                let heldout = data.heldout.as_ref().ok_or_else(|| EvalError::Config("no held-out set".into()))?;
                let budget = c.budget.unwrap_or(gen.nrows().min(heldout.len()));
                let v = rediscovery(heldout.designs(), gen, budget, &c.distance, seed)?;
                Ok(per_point(name, v, seed).with_setting("budget", budget))
            })(),
        ),
        MlEfficacy(c) => Outcome {
            entries: with_priors(data, spec, seed, |reference| {
                let gy = data.generated.require_performance(name)?;
                let real = data.heldout.as_ref().unwrap_or(reference);
                let v = ml_efficacy(gen, gy, real.designs(), real.require_performance(name)?, c.k, &c.distance)?;
                Ok(scalar(name, v, seed))
            }),
            curve: None,
        },
        InterSampleDistance(c) => Outcome::single(
            name,
            inter_sample_distance(gen, c.rank, &c.distance).map(|v| per_point(name, v, seed)),
        ),
        DistanceToCentroid(c) => Outcome::single(
            name,
            distance_to_centroid(gen, c.center).map(|r| per_point(name, r.per_point, seed).with_setting("center_point", r.center)),
        ),
        Entropy(c) => Outcome::single(
            name,
            entropy(gen, c.mode()).map(|r| {
                let e = scalar(name, r.value, seed);
                match r.warning {
                    Some(w) => e.with_setting("warning", w),
                    None => e,
                }
            }),
        ),
        DppDiversity(c) => Outcome::single(
            name,
            dpp_diversity(gen, *c, seed).map(|r| scalar(name, r.value, seed).with_setting("sigma", r.sigma)),
        ),
        SmallestEnclosingHypersphere(_) => Outcome::single(
            name,
            smallest_enclosing_hypersphere(gen).map(|s| {
                scalar(name, s.radius, seed)
                    .with_setting("volume", s.volume)
                    .with_setting("exact", s.exact)
                    .with_setting("approximation_factor", s.approximation_factor)
            }),
        ),
        ConvexHull(c) => Outcome::single(
            name,
            convex_hull_volume(gen, c.embedding_dim).map(|h| {
                scalar(name, h.volume, seed)
                    .with_setting("embedding_dim", h.embedding_dim)
                    .with_setting("degenerate", h.degenerate)
                    .with_setting("hull_vertices", h.vertices.len())
            }),
        ),
        ConstraintSatisfaction(_) | ConstraintSatisfactionRate(_) => {
            let weights = match spec {
                ConstraintSatisfactionRate(w) => w.weights.clone(),
                _ => None,
            };
            let entry = constraint_evaluations(data, name, weights).and_then(|ev| {
                let out = match spec {
                    ConstraintSatisfaction(_) => ev.satisfaction()?,
                    _ => ev.rate()?,
                };
                let values: Vec<f64> = out.per_point.iter().flatten().copied().collect();
                Ok(per_point(name, values, seed).with_setting("indeterminate", out.indeterminate))
            });
            Outcome::single(name, entry)
        }
        SignedDistanceToConstraints(_) => {
            let entry = match (data.ring(), data.generated.sdfs()) {
                (Some(ring), _) => Ok(gen
                    .rows()
                    .map(|r| ring.constraint_sdfs(r).into_iter().fold(f64::INFINITY, f64::min))
                    .collect()),
                (None, Some(s)) => binding_sdf(s),
                (None, None) => Err(EvalError::missing(name, Requirement::CFC)),
            };
            Outcome::single(name, entry.map(|v| per_point(name, v, seed)))
        }
        PredictedConstraintSatisfaction(c) => Outcome::single(
            name,
            data.labeled_pool().and_then(|(valid, invalid)| {
                crate::constraints::predicted_constraint_satisfaction(gen, &valid, &invalid, c.k, &c.distance)
                    .map(|v| per_point(name, v, seed))
            }),
        ),
        NearestInvalidDatapoint(c) => Outcome::single(
            name,
            data.labeled_pool().and_then(|(_, invalid)| {
                crate::constraints::nearest_invalid_datapoint(gen, &invalid, &c.distance).map(|v| per_point(name, v, seed))
            }),
        ),
        Hypervolume(c) => Outcome::single(
            name,
            (|| {
                let p = generated_perf(data, name)?;
                let reference = match &c.reference {
                    Some(r) => r.clone(),
                    None => quantile_point(data.dataset()?.require_performance(name)?, c.quantile)?,
                };
                let v = hypervolume(p, &reference)?;
                Ok(scalar(name, v, seed).with_setting("reference_point", reference))
            })(),
        ),
        GenerationalDistance(c) => Outcome::single(
            name,
            (|| {
                let p = generated_perf(data, name)?;
                let (reference, source) = match (&data.reference, data.is_kno1()) {
                    (Some(r), _) => (ParetoRef::new(r.clone())?, "reference set"),
                    (None, true) => {
                        let front = kno1_front(KNO1_FRONT_GRID)?;
                        (ParetoRef::new(front.require_performance(name)?.clone())?, "kno1 grid front")
                    }
                    (None, false) => (ParetoRef::from_front(data.dataset()?.require_performance(name)?)?, "dataset front"),
                };
                let v = generational_distance(p, &reference, &c.distance)?;
                Ok(per_point(name, v, seed)
                    .with_setting("reference_source", source)
                    .with_setting("reference_points", reference.points().nrows()))
            })(),
        ),
        OptimalityGap(c) => Outcome::single(name, run_optimality_gap(data, c, seed)),
        TargetAchievement(_) => Outcome::single(
            name,
            per_target(data, name, seed, |p, t| target_achievement(p, t).map(|b| if b { 1.0 } else { 0.0 })),
        ),
        TargetAchievementRate(_) => Outcome::single(name, per_target(data, name, seed, target_achievement_rate)),
        SignedDistanceToTarget(_) => Outcome::single(name, per_target(data, name, seed, signed_distance_to_target)),
        MinimumTargetRatio(_) => Outcome::single(name, per_target(data, name, seed, minimum_target_ratio)),
        Dtai(_) => Outcome::single(name, per_target(data, name, seed, dtai)),
        ConditioningAdherence(_) => Outcome {
            entries: per_query(name, data.queries(), |q| {
                let values = match (&data.problem, data.generated.conditions()) {
                    (Some(Problem::Sixmode(six)), _) => {
                        let f = |x: &[f64]| Ok(vec![six.condition(x)]);
                        let a = conditioning_adherence(gen, q, &f)?;
                        a.per_point.into_iter().flatten().collect()
                    }
                    (_, Some(conds)) => adherence_from_conditions(conds, q)?,
                    _ => return Err(EvalError::missing(name, Requirement::Cond)),
                };
                Ok(per_point(name, values, seed))
            }),
            curve: None,
        },
        ConditioningReconstruction(c) => Outcome {
            entries: per_query(name, data.queries(), |q| {
                let ds = data.dataset()?;
                let conds = ds.require_conditions(name)?;
                let v = conditioning_reconstruction(gen, q, ds.designs(), conds, c.k, &c.distance)?;
                Ok(per_point(name, v, seed))
            }),
            curve: None,
        },
    }
}

fn run_optimality_gap(data: &EvalData, c: &super::config::OptGapConfig, seed: RunSeed) -> Result<MetricEntry> {
    let name = "optimality_gap";
    if !data.is_kno1() {
        return Err(EvalError::missing(name, Requirement::DP));
    }
    let targets = data.targets.clone();
    let objective = move |x: &[f64]| -> f64 {
        let Ok(f) = kno1(x) else { return f64::NAN };
        match &c.scalarization {
            Scalarization::Dtai => targets.as_ref().and_then(|t| dtai(&f, t).ok()).map_or(f64::NAN, |v| -v),
            Scalarization::WeightedSum { weights } => -weights.iter().zip(f).map(|(w, v)| w * v).sum::<f64>(),
        }
    };
    let mut settings = c.descent.clone();
    settings.lower.get_or_insert_with(|| vec![-0.5, -0.5]);
    settings.upper.get_or_insert_with(|| vec![0.5, 0.5]);
    let results = data
        .generated
        .designs()
        .rows()
        .collect::<Vec<_>>()
        .par_iter()
        .map(|x| optimality_gap(x, &objective, None, &settings))
        .collect::<Result<Vec<_>>>()?;
    let mean = |f: fn(&crate::quality::OptGapResult) -> f64| results.iter().map(f).sum::<f64>() / results.len() as f64;
    let objective_gap = mean(|r| r.objective_gap);
    let instantaneous = mean(|r| r.instantaneous_design_gap);
    let converged = results.iter().filter(|r| r.converged).count();
    Ok(per_point(name, results.iter().map(|r| r.design_space_gap).collect(), seed)
        .with_setting("mean_objective_gap", objective_gap)
        .with_setting("mean_instantaneous_design_gap", instantaneous)
        .with_setting("converged", Value::from(converged)))
}
