use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use indexmap::IndexMap;
use serde::{Deserialize, Serialize};
use serde_json::Value;

use crate::catalog::{direction_of, Direction};
use crate::error::Result;
use crate::seed::RunSeed;

/// One metric result with the exact settings and seed that produced it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MetricEntry {
    /// Scalar summary. `None` only when the metric failed.
    pub value: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub per_point: Option<Vec<f64>>,
    pub settings: BTreeMap<String, Value>,
    pub seed: u64,
    pub direction: Direction,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
}

impl MetricEntry {
    pub fn scalar(value: f64, direction: Direction, seed: RunSeed) -> Self {
        MetricEntry {
            value: Some(value),
            per_point: None,
            settings: BTreeMap::new(),
            seed: seed.value(),
            direction,
            error: None,
        }
    }

    /// Per-point metric; the scalar value is the mean of `values`.
    pub fn per_point(values: Vec<f64>, direction: Direction, seed: RunSeed) -> Self {
        let mean = mean(&values);
        MetricEntry {
            value: Some(mean),
            per_point: Some(values),
            settings: BTreeMap::new(),
            seed: seed.value(),
            direction,
            error: None,
        }
    }

    pub fn failed(message: impl Into<String>, direction: Direction, seed: RunSeed) -> Self {
        MetricEntry {
            value: None,
            per_point: None,
            settings: BTreeMap::new(),
            seed: seed.value(),
            direction,
            error: Some(message.into()),
        }
    }

    pub fn with_setting(mut self, key: &str, value: impl Into<Value>) -> Self {
        self.settings.insert(key.to_string(), value.into());
        self
    }

    pub fn is_error(&self) -> bool {
        self.error.is_some()
    }
}

/// Metric results keyed by name, in insertion order.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct MetricReport {
    entries: IndexMap<String, MetricEntry>,
}

impl MetricReport {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&mut self, name: impl Into<String>, entry: MetricEntry) {
        self.entries.insert(name.into(), entry);
    }

    /// Insert a computed result, or a failed entry carrying the error message.
    /// The direction is looked up from the metric catalog by `metric`.
    pub fn record(
        &mut self,
        key: impl Into<String>,
        metric: &str,
        seed: RunSeed,
        result: Result<MetricEntry>,
    ) {
        let entry = match result {
            Ok(e) => e,
            Err(e) => MetricEntry::failed(e.to_string(), direction_of(metric), seed),
        };
        self.insert(key, entry);
    }

    pub fn get(&self, name: &str) -> Option<&MetricEntry> {
        self.entries.get(name)
    }

    pub fn value(&self, name: &str) -> Option<f64> {
        self.get(name).and_then(|e| e.value)
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn names(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn iter(&self) -> impl Iterator<Item = (&str, &MetricEntry)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), v))
    }

    pub fn has_errors(&self) -> bool {
        self.entries.values().any(MetricEntry::is_error)
    }

    pub fn merge(&mut self, other: MetricReport) {
        self.entries.extend(other.entries);
    }

    pub fn to_json(&self) -> Result<String> {
        let mut s = serde_json::to_string_pretty(self)?;
        s.push('\n');
        Ok(s)
    }

    pub fn from_json(s: &str) -> Result<Self> {
        Ok(serde_json::from_str(s)?)
    }

    pub fn write(&self, path: &Path) -> Result<()> {
        fs::write(path, self.to_json()?)?;
        Ok(())
    }

    pub fn read(path: &Path) -> Result<Self> {
        Self::from_json(&fs::read_to_string(path)?)
    }
}

pub(crate) fn mean(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    values.iter().sum::<f64>() / values.len() as f64
}
