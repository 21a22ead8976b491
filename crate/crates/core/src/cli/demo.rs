//! Demonstration batteries on the synthetic problems.
//!
//! The two "models" are stand-ins: seeded resamples of the training data with
//! Gaussian noise at two levels. Their scores illustrate the metrics; they are
//! not results for any trained generative model.

use std::collections::HashMap;
use std::path::Path;

use rand::Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::conditioning::{conditional_prior, ConditionQuery, PriorMode};
use crate::data::{ColumnNames, DesignSet};
use crate::error::{EvalError, Result};
use crate::matrix::Matrix;
use crate::quality::TargetSpec;
use crate::report::MetricReport;
use crate::seed::RunSeed;
use crate::similarity::PrCurve;
use crate::synth::{kno1_set, sample_ring, sample_sixmode, RingProblem, SixModeSpec, KNO1_HALF_WIDTH};

use super::commands::write_outputs;
use super::config::{ConditioningConfig, MetricSpec, Problem};
use super::engine::{evaluate, EvalData};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Experiment {
    Similarity,
    Exploration,
    Constraints,
    Quality,
    Conditioning,
}

impl Experiment {
    pub const ALL: [Experiment; 5] = [
        Experiment::Similarity,
        Experiment::Exploration,
        Experiment::Constraints,
        Experiment::Quality,
        Experiment::Conditioning,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Experiment::Similarity => "similarity",
            Experiment::Exploration => "exploration",
            Experiment::Constraints => "constraints",
            Experiment::Quality => "quality",
            Experiment::Conditioning => "conditioning",
        }
    }
}

impl std::str::FromStr for Experiment {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self> {
        Experiment::ALL
            .into_iter()
            .find(|e| e.name() == s)
            .ok_or_else(|| EvalError::Config(format!("unknown experiment `{s}`")))
    }
}

/// Sizes of the demo sets.
pub const DEMO_DATA: usize = 1000;
pub const DEMO_GENERATED: usize = 500;
pub const DEMO_HELDOUT: usize = 200;

/// Noise levels of the two stand-in models, per experiment scale.
const NOISE: [(&str, f64); 2] = [("model_a", 0.05), ("model_b", 0.25)];
/// KNO1 designs live in a unit box, so the six-mode layout is shrunk to fit.
const KNO1_LAYOUT_SCALE: f64 = 0.25;

#[derive(Debug, Clone)]
pub struct DemoOutput {
    pub report: MetricReport,
    pub pr_curves: Vec<(String, PrCurve)>,
    pub fronts: Vec<(String, DesignSet)>,
}

impl DemoOutput {
    pub fn write(&self, dir: &Path) -> Result<()> {
        let curves: Vec<(&str, &PrCurve)> = self.pr_curves.iter().map(|(l, c)| (l.as_str(), c)).collect();
        let fronts: Vec<(&str, &DesignSet)> = self.fronts.iter().map(|(l, s)| (l.as_str(), s)).collect();
        write_outputs(dir, &self.report, &curves, &fronts, &HashMap::new())
    }
}

/// Draw `n` rows of `source` with replacement and add isotropic noise.
pub fn perturbed_resample(source: &Matrix, n: usize, noise: f64, seed: RunSeed) -> Result<Matrix> {
    if source.is_empty() {
        return Err(EvalError::Empty("resampling source"));
    }
    let mut rng = seed.rng();
    let mut data = Vec::with_capacity(n * source.ncols());
    for _ in 0..n {
        let row = source.row(rng.random_range(0..source.nrows()));
        for v in row {
            let z: f64 = StandardNormal.sample(&mut rng);
            data.push(v + noise * z);
        }
    }
    Matrix::from_vec(n, source.ncols(), data)
}

fn metrics(json: &str) -> Vec<MetricSpec> {
    serde_json::from_str(json).expect("demo metric lists are valid")
}

fn names_2d() -> ColumnNames {
    ColumnNames {
        design: vec!["x1".into(), "x2".into()],
        performance: vec!["f1".into(), "f2".into()],
        conditions: vec!["c1".into()],
        sdfs: Vec::new(),
    }
}

/// Six-mode designs with the condition doubling as an auxiliary label.
fn sixmode_labeled(spec: &SixModeSpec, designs: Matrix) -> Result<DesignSet> {
    let c: Vec<f64> = designs.rows().map(|r| spec.condition(r)).collect();
    let c = Matrix::column_vector(&c);
    Ok(DesignSet::new(designs)?
        .with_conditions(c.clone())?
        .with_performance(c)?
        .with_names(ColumnNames {
            performance: vec!["c1".into()],
            ..names_2d()
        }))
}

fn clamp_to_kno1(m: &Matrix) -> Matrix {
    m.map(|v| v.clamp(-KNO1_HALF_WIDTH, KNO1_HALF_WIDTH))
}

struct Battery {
    data: EvalData,
    metrics: Vec<MetricSpec>,
    /// Generated sets per model, built from `(label, noise)`.
    models: Vec<(String, f64, DesignSet)>,
}

fn battery(experiment: Experiment, seed: RunSeed) -> Result<Battery> {
    let data_seed = seed.derive(0);
    let model_seed = |i: usize| seed.derive(10 + i as u64);
    let six = SixModeSpec::default();
    match experiment {
        Experiment::Similarity | Experiment::Exploration => {
            let dataset = sample_sixmode(&six, DEMO_DATA, data_seed)?;
            let heldout = sample_sixmode(&six, DEMO_HELDOUT, seed.derive(1))?;
            let mut models = Vec::new();
            for (i, (label, noise)) in NOISE.iter().enumerate() {
                let g = perturbed_resample(dataset.designs(), DEMO_GENERATED, *noise, model_seed(i))?;
                models.push((label.to_string(), *noise, sixmode_labeled(&six, g)?));
            }
            let mut data = EvalData::new(models[0].2.clone());
            data.dataset = Some(sixmode_labeled(&six, dataset.designs().clone())?);
            data.heldout = Some(sixmode_labeled(&six, heldout.designs().clone())?);
            let metrics = if experiment == Experiment::Similarity {
                metrics(
                    r#"[{"metric": "mmd"}, {"metric": "pr_curve"}, {"metric": "f1"},
                        {"metric": "precision_f0.1"}, {"metric": "recall_f10"}, {"metric": "pr_auc"},
                        {"metric": "nearest_datapoint"}, {"metric": "nearest_generated_sample"},
                        {"metric": "rediscovery"}, {"metric": "ml_efficacy"}]"#,
                )
            } else {
                metrics(
                    r#"[{"metric": "inter_sample_distance"}, {"metric": "novelty_nearest_datapoint"},
                        {"metric": "distance_to_centroid"}, {"metric": "entropy"}, {"metric": "dpp_diversity"},
                        {"metric": "smallest_enclosing_hypersphere"}, {"metric": "convex_hull"}]"#,
                )
            };
            Ok(Battery { data, metrics, models })
        }
        Experiment::Constraints => {
            let ring = RingProblem::default();
            let (valid, invalid) = sample_ring(&ring, DEMO_DATA, DEMO_DATA, data_seed)?;
            let mut models = Vec::new();
            for (i, (label, noise)) in NOISE.iter().enumerate() {
                let g = perturbed_resample(valid.designs(), DEMO_GENERATED, noise * 0.5, model_seed(i))?;
                models.push((label.to_string(), noise * 0.5, DesignSet::new(g)?));
            }
            let mut data = EvalData::new(models[0].2.clone());
            data.dataset = Some(valid);
            data.invalid = Some(invalid);
            data.problem = Some(Problem::Ring(ring));
            let metrics = metrics(
                r#"[{"metric": "constraint_satisfaction"}, {"metric": "constraint_satisfaction_rate"},
                    {"metric": "signed_distance_to_constraints"}, {"metric": "predicted_constraint_satisfaction"},
                    {"metric": "nearest_invalid_datapoint"}]"#,
            );
            Ok(Battery { data, metrics, models })
        }
        Experiment::Quality => {
            let layout = SixModeSpec {
                centers: six.centers.iter().map(|c| [c[0] * KNO1_LAYOUT_SCALE, c[1] * KNO1_LAYOUT_SCALE]).collect(),
                stddev: six.stddev * KNO1_LAYOUT_SCALE,
                ..six.clone()
            };
            let raw = sample_sixmode(&layout, DEMO_DATA, data_seed)?;
            let dataset = kno1_set(clamp_to_kno1(raw.designs()))?;
            let mut models = Vec::new();
            for (i, (label, noise)) in NOISE.iter().enumerate() {
                let scaled = noise * KNO1_LAYOUT_SCALE;
                let g = perturbed_resample(dataset.designs(), DEMO_GENERATED, scaled, model_seed(i))?;
                models.push((label.to_string(), scaled, kno1_set(clamp_to_kno1(&g))?));
            }
            let mut data = EvalData::new(models[0].2.clone());
            data.dataset = Some(dataset);
            data.problem = Some(Problem::Kno1);
            data.targets = Some(TargetSpec::new(vec![0.5, 0.5]).with_alpha_beta(vec![1.0, 1.0], vec![1.0, 1.0]));
            let metrics = metrics(
                r#"[{"metric": "hypervolume"}, {"metric": "generational_distance"},
                    {"metric": "target_achievement_rate"}, {"metric": "signed_distance_to_target"},
                    {"metric": "minimum_target_ratio"}, {"metric": "dtai"}]"#,
            );
            Ok(Battery { data, metrics, models })
        }
        Experiment::Conditioning => {
            let dataset = sample_sixmode(&six, DEMO_DATA, data_seed)?;
            let query = ConditionQuery::new(vec![0.3]);
            let prior = conditional_prior(&dataset, &query)?;
            // model_a follows the condition, model_b ignores it
            let sources = [prior.designs(), dataset.designs()];
            let mut models = Vec::new();
            for (i, ((label, _), source)) in NOISE.iter().zip(sources).enumerate() {
                let noise = NOISE[0].1;
                let g = perturbed_resample(source, DEMO_GENERATED, noise, model_seed(i))?;
                models.push((label.to_string(), noise, DesignSet::new(g)?));
            }
            let mut data = EvalData::new(models[0].2.clone());
            data.dataset = Some(dataset);
            data.problem = Some(Problem::Sixmode(six));
            data.conditioning = Some(ConditioningConfig {
                queries: vec![query],
                weights: None,
            });
            let modes = serde_json::to_string(&[PriorMode::Conditional, PriorMode::Marginal])?;
            let metrics = metrics(&format!(
                r#"[{{"metric": "conditioning_adherence"}}, {{"metric": "conditioning_reconstruction"}},
                    {{"metric": "mmd", "prior": {modes}}}, {{"metric": "recall_f10", "prior": {modes}}}]"#
            ));
            Ok(Battery { data, metrics, models })
        }
    }
}

/// Run one demonstration battery for both stand-in models.
pub fn run_demo(experiment: Experiment, seed: u64) -> Result<DemoOutput> {
    let seed = RunSeed(seed);
    let Battery { mut data, metrics, models } = battery(experiment, seed)?;
    let mut report = MetricReport::new();
    let mut pr_curves = Vec::new();
    let mut fronts = Vec::new();
    for (label, noise, generated) in models {
        data.generated = generated;
        let ev = evaluate(&data, &metrics, seed.derive(100))?;
        for (name, entry) in ev.report.iter() {
            let entry = entry
                .clone()
                .with_setting("stand_in_noise", noise)
                .with_setting("experiment", experiment.name());
            report.insert(format!("{label}/{name}"), entry);
        }
        if let Some(c) = ev.pr_curve {
            pr_curves.push((label.clone(), c));
        }
        if data.generated.performance().is_some() && experiment == Experiment::Quality {
            fronts.push((label, data.generated.clone()));
        }
    }
    Ok(DemoOutput { report, pr_curves, fronts })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn resample_is_seeded() {
        let m = Matrix::from_rows(&[[0.0, 0.0], [1.0, 1.0]]).unwrap();
        let a = perturbed_resample(&m, 10, 0.1, RunSeed(4)).unwrap();
        assert_eq!(a, perturbed_resample(&m, 10, 0.1, RunSeed(4)).unwrap());
        let exact = perturbed_resample(&m, 10, 0.0, RunSeed(4)).unwrap();
        assert!(exact.rows().all(|r| r == [0.0, 0.0] || r == [1.0, 1.0]));
    }

    #[test]
    fn experiment_names_parse() {
        for e in Experiment::ALL {
            assert_eq!(e.name().parse::<Experiment>().unwrap(), e);
        }
        assert!("bogus".parse::<Experiment>().is_err());
    }
}
