use std::collections::HashMap;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::conditioning::{ConditionQuery, PriorMode};
use crate::data::{ObjectiveDirection, ScaleMethod, Schema};
use crate::distance::{Bandwidth, DistanceSpec};
use crate::error::{EvalError, Result};
use crate::exploration::{Center, DppSettings, EntropyMode};
use crate::quality::{DescentSettings, TargetSpec};
use crate::similarity::{MmdEstimator, PrdSettings};
use crate::synth::{RingProblem, SixModeSpec};

/// A complete `eval` run: inputs, problem context and the metric battery.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct EvalConfig {
    #[serde(default)]
    pub seed: u64,
    pub inputs: InputPaths,
    #[serde(default)]
    pub problem: Option<Problem>,
    #[serde(default)]
    pub targets: Option<TargetSpec>,
    #[serde(default)]
    pub conditioning: Option<ConditioningConfig>,
    /// Relative to the config file. Defaults to its directory.
    #[serde(default)]
    pub output_dir: Option<PathBuf>,
    pub metrics: Vec<MetricSpec>,
}

impl EvalConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| EvalError::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| EvalError::Config(format!("cannot read {}: {e}", path.display())))?;
        Self::from_json(&text)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InputPaths {
    #[serde(default)]
    pub dataset: Option<PathBuf>,
    pub generated: PathBuf,
    #[serde(default)]
    pub invalid: Option<PathBuf>,
    #[serde(default)]
    pub heldout: Option<PathBuf>,
    /// Pareto reference set; its performance columns are used.
    #[serde(default)]
    pub reference: Option<PathBuf>,
    /// Column roles shared by every file; columns absent from a file are skipped.
    #[serde(default)]
    pub schema: Schema,
    #[serde(default)]
    pub directions: HashMap<String, ObjectiveDirection>,
    /// Design-column scaling, fitted on the dataset.
    #[serde(default)]
    pub scale: ScaleMethod,
}

/// Analytic problem the designs come from, enabling closed-form constraints,
/// conditions and differentiable performance.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "name", rename_all = "snake_case")]
pub enum Problem {
    Kno1,
    Ring(RingProblem),
    Sixmode(SixModeSpec),
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConditioningConfig {
    pub queries: Vec<ConditionQuery>,
    /// Sweep weights; uniform when absent.
    #[serde(default)]
    pub weights: Option<Vec<f64>>,
}

fn k5() -> usize {
    5
}

fn rank1() -> usize {
    1
}

fn quantile_default() -> f64 {
    0.01
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MmdConfig {
    pub bandwidth: Bandwidth,
    pub estimator: MmdEstimator,
    pub prior: Vec<PriorMode>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct PrdConfig {
    pub clusters: usize,
    pub angle_resolution: usize,
    pub runs: usize,
    pub prior: Vec<PriorMode>,
}

impl Default for PrdConfig {
    fn default() -> Self {
        let d = PrdSettings::default();
        PrdConfig {
            clusters: d.clusters,
            angle_resolution: d.angle_resolution,
            runs: d.runs,
            prior: Vec::new(),
        }
    }
}

impl PrdConfig {
    pub fn settings(&self) -> PrdSettings {
        PrdSettings {
            clusters: self.clusters,
            angle_resolution: self.angle_resolution,
            runs: self.runs,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct NearestConfig {
    pub distance: DistanceSpec,
    pub prior: Vec<PriorMode>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BudgetConfig {
    pub distance: DistanceSpec,
    /// Generated-sample budget; defaults to the smaller of the two set sizes.
    pub budget: Option<usize>,
    pub prior: Vec<PriorMode>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct KnnConfig {
    #[serde(default = "k5")]
    pub k: usize,
    #[serde(default)]
    pub distance: DistanceSpec,
    #[serde(default)]
    pub prior: Vec<PriorMode>,
}

impl Default for KnnConfig {
    fn default() -> Self {
        KnnConfig {
            k: 5,
            distance: DistanceSpec::Euclidean,
            prior: Vec::new(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RankConfig {
    #[serde(default = "rank1")]
    pub rank: usize,
    #[serde(default)]
    pub distance: DistanceSpec,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct CenterConfig {
    pub center: Center,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct EntropyConfig {
    pub estimator: EntropyEstimator,
    pub k: usize,
    pub bins: usize,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum EntropyEstimator {
    #[default]
    Knn,
    Histogram,
}

impl Default for EntropyConfig {
    fn default() -> Self {
        EntropyConfig {
            estimator: EntropyEstimator::Knn,
            k: 3,
            bins: 10,
        }
    }
}

impl EntropyConfig {
    pub fn mode(&self) -> EntropyMode {
        match self.estimator {
            EntropyEstimator::Knn => EntropyMode::Knn { k: self.k },
            EntropyEstimator::Histogram => EntropyMode::Histogram { bins: self.bins },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct HullConfig {
    pub embedding_dim: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct NoSettings {}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct DistanceConfig {
    pub distance: DistanceSpec,
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct WeightsConfig {
    pub weights: Option<Vec<f64>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct HypervolumeConfig {
    /// Maximization-framed reference point; derived from the dataset when absent.
    #[serde(default)]
    pub reference: Option<Vec<f64>>,
    #[serde(default = "quantile_default")]
    pub quantile: f64,
}

impl Default for HypervolumeConfig {
    fn default() -> Self {
        HypervolumeConfig {
            reference: None,
            quantile: quantile_default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Scalarization {
    /// Minimize `-DTAI` against the configured targets.
    #[default]
    Dtai,
    /// Maximize a weighted sum of (maximization-framed) objectives.
    WeightedSum { weights: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OptGapConfig {
    pub scalarization: Scalarization,
    pub descent: DescentSettings,
}

/// One requested metric and its settings; `metric` selects the variant.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "metric", rename_all = "snake_case")]
pub enum MetricSpec {
    Mmd(MmdConfig),
    PrCurve(PrdConfig),
    F1(PrdConfig),
    #[serde(rename = "precision_f0.1")]
    PrecisionF01(PrdConfig),
    RecallF10(PrdConfig),
    PrAuc(PrdConfig),
    NearestDatapoint(NearestConfig),
    NearestGeneratedSample(BudgetConfig),
    Rediscovery(BudgetConfig),
    MlEfficacy(KnnConfig),
    InterSampleDistance(RankConfig),
    NoveltyNearestDatapoint(NearestConfig),
    DistanceToCentroid(CenterConfig),
    Entropy(EntropyConfig),
    DppDiversity(DppSettings),
    SmallestEnclosingHypersphere(NoSettings),
    ConvexHull(HullConfig),
    ConstraintSatisfaction(NoSettings),
    ConstraintSatisfactionRate(WeightsConfig),
    SignedDistanceToConstraints(NoSettings),
    PredictedConstraintSatisfaction(KnnConfig),
    NearestInvalidDatapoint(DistanceConfig),
    Hypervolume(HypervolumeConfig),
    GenerationalDistance(DistanceConfig),
    OptimalityGap(OptGapConfig),
    TargetAchievement(NoSettings),
    TargetAchievementRate(NoSettings),
    SignedDistanceToTarget(NoSettings),
    MinimumTargetRatio(NoSettings),
    Dtai(NoSettings),
    ConditioningAdherence(NoSettings),
    ConditioningReconstruction(KnnConfig),
}

impl MetricSpec {
    /// Catalog name, also the report key.
    pub fn name(&self) -> &'static str {
        use MetricSpec::*;
        match self {
            Mmd(_) => "mmd",
            PrCurve(_) => "pr_curve",
            F1(_) => "f1",
            PrecisionF01(_) => "precision_f0.1",
            RecallF10(_) => "recall_f10",
            PrAuc(_) => "pr_auc",
            NearestDatapoint(_) => "nearest_datapoint",
            NearestGeneratedSample(_) => "nearest_generated_sample",
            Rediscovery(_) => "rediscovery",
            MlEfficacy(_) => "ml_efficacy",
            InterSampleDistance(_) => "inter_sample_distance",
            NoveltyNearestDatapoint(_) => "novelty_nearest_datapoint",
            DistanceToCentroid(_) => "distance_to_centroid",
            Entropy(_) => "entropy",
            DppDiversity(_) => "dpp_diversity",
            SmallestEnclosingHypersphere(_) => "smallest_enclosing_hypersphere",
            ConvexHull(_) => "convex_hull",
            ConstraintSatisfaction(_) => "constraint_satisfaction",
            ConstraintSatisfactionRate(_) => "constraint_satisfaction_rate",
            SignedDistanceToConstraints(_) => "signed_distance_to_constraints",
            PredictedConstraintSatisfaction(_) => "predicted_constraint_satisfaction",
            NearestInvalidDatapoint(_) => "nearest_invalid_datapoint",
            Hypervolume(_) => "hypervolume",
            GenerationalDistance(_) => "generational_distance",
            OptimalityGap(_) => "optimality_gap",
            TargetAchievement(_) => "target_achievement",
            TargetAchievementRate(_) => "target_achievement_rate",
            SignedDistanceToTarget(_) => "signed_distance_to_target",
            MinimumTargetRatio(_) => "minimum_target_ratio",
            Dtai(_) => "dtai",
            ConditioningAdherence(_) => "conditioning_adherence",
            ConditioningReconstruction(_) => "conditioning_reconstruction",
        }
    }

    /// Prior modes requested for a binary metric.
    pub fn priors(&self) -> &[PriorMode] {
        use MetricSpec::*;
        match self {
            Mmd(c) => &c.prior,
            PrCurve(c) | F1(c) | PrecisionF01(c) | RecallF10(c) | PrAuc(c) => &c.prior,
            NearestDatapoint(c) | NoveltyNearestDatapoint(c) => &c.prior,
            NearestGeneratedSample(c) => &c.prior,
            MlEfficacy(c) => &c.prior,
            _ => &[],
        }
    }

    /// Settings as a flat JSON object for the report.
    pub fn settings(&self) -> serde_json::Map<String, serde_json::Value> {
        match serde_json::to_value(self) {
            Ok(serde_json::Value::Object(mut m)) => {
                m.remove("metric");
                m.remove("prior");
                m
            }
            _ => serde_json::Map::new(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn appendix_defaults() {
        let m: MetricSpec = serde_json::from_str(r#"{"metric": "f1"}"#).unwrap();
        let MetricSpec::F1(c) = &m else { panic!() };
        assert_eq!((c.clusters, c.angle_resolution, c.runs), (20, 1000, 10));
        let m: MetricSpec = serde_json::from_str(r#"{"metric": "dpp_diversity"}"#).unwrap();
        let MetricSpec::DppDiversity(d) = m else { panic!() };
        assert_eq!((d.subset_size, d.power), (10, 0.1));
        let m: MetricSpec = serde_json::from_str(r#"{"metric": "predicted_constraint_satisfaction"}"#).unwrap();
        let MetricSpec::PredictedConstraintSatisfaction(k) = m else { panic!() };
        assert_eq!(k.k, 5);
        let q: ConditionQuery = serde_json::from_str(r#"{"target": [0.3]}"#).unwrap();
        assert_eq!(q.fraction, 0.1);
    }

    #[test]
    fn names_round_trip() {
        for name in crate::catalog::CATALOG.iter().map(|m| m.name) {
            let spec: MetricSpec = serde_json::from_str(&format!(r#"{{"metric": "{name}"}}"#))
                .unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(spec.name(), name);
        }
    }

    #[test]
    fn unknown_settings_rejected() {
        assert!(serde_json::from_str::<MetricSpec>(r#"{"metric": "mmd", "kernel": "rbf"}"#).is_err());
        assert!(serde_json::from_str::<MetricSpec>(r#"{"metric": "bogus"}"#).is_err());
    }

    #[test]
    fn settings_are_flat() {
        let m: MetricSpec = serde_json::from_str(r#"{"metric": "convex_hull", "embedding_dim": 2}"#).unwrap();
        assert_eq!(m.settings().get("embedding_dim"), Some(&serde_json::json!(2)));
        assert!(!m.settings().contains_key("metric"));
    }
}
