use std::collections::HashMap;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use crate::data::{load_design_set, scale_features, write_design_set, DesignSet, ObjectiveDirection, Schema};
use crate::error::{EvalError, Result};
use crate::quality::pareto_front;
use crate::report::MetricReport;
use crate::seed::RunSeed;
use crate::similarity::{write_pr_curve_csv, PrCurve};
use crate::synth::{sample_kno1, sample_ring, sample_sixmode, RingProblem, SixModeSpec};

use super::config::{EvalConfig, InputPaths};
use super::engine::{evaluate, EvalData};

pub const REPORT_FILE: &str = "report.json";
pub const PR_CURVE_FILE: &str = "pr_curve.csv";
pub const PARETO_FILE: &str = "pareto.csv";

/// How a completed run went; failed runs are errors instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum RunStatus {
    Complete,
    CompletedWithMetricErrors,
}

impl RunStatus {
    pub fn of(report: &MetricReport) -> Self {
        if report.has_errors() {
            RunStatus::CompletedWithMetricErrors
        } else {
            RunStatus::Complete
        }
    }

    pub fn exit_code(self) -> i32 {
        match self {
            RunStatus::Complete => 0,
            RunStatus::CompletedWithMetricErrors => 2,
        }
    }
}

fn csv_header(path: &Path) -> Result<Vec<String>> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_path(path)?;
    Ok(rdr.headers()?.iter().map(str::to_string).collect())
}

/// Load one input file, keeping only the schema entries and directions for
/// columns that file actually has.
pub fn load_input(path: &Path, schema: &Schema, directions: &HashMap<String, ObjectiveDirection>) -> Result<DesignSet> {
    let header = csv_header(path)?;
    let schema = schema.restricted_to(&header);
    let directions: HashMap<String, ObjectiveDirection> = directions
        .iter()
        .filter(|(c, _)| header.contains(c))
        .map(|(c, d)| (c.clone(), *d))
        .collect();
    load_design_set(path, &schema, &directions)
}

fn resolve(base: &Path, p: &Path) -> PathBuf {
    if p.is_absolute() {
        p.to_path_buf()
    } else {
        base.join(p)
    }
}

/// Load every input named in `inputs`, relative to `base`, and apply scaling.
pub fn load_inputs(inputs: &InputPaths, base: &Path) -> Result<(EvalData, HashMap<String, ObjectiveDirection>)> {
    let load = |p: &Path| load_input(&resolve(base, p), &inputs.schema, &inputs.directions);
    let optional = |p: &Option<PathBuf>| p.as_deref().map(load).transpose();
    let mut data = EvalData::new(load(&inputs.generated)?);
    data.dataset = optional(&inputs.dataset)?;
    data.invalid = optional(&inputs.invalid)?;
    data.heldout = optional(&inputs.heldout)?;
    data.reference = optional(&inputs.reference)?
        .map(|r| r.require_performance("reference set").cloned())
        .transpose()?;
    if inputs.scale != crate::data::ScaleMethod::None {
        let dataset = data
            .dataset
            .as_ref()
            .ok_or_else(|| EvalError::Config("scaling is fitted on the dataset, which is missing".into()))?;
        let stats = scale_features(dataset, inputs.scale, None)?.stats;
        let apply = |s: &DesignSet| scale_features(s, inputs.scale, Some(&stats)).map(|r| r.set);
        data.generated = apply(&data.generated)?;
        data.dataset = data.dataset.as_ref().map(apply).transpose()?;
        data.invalid = data.invalid.as_ref().map(apply).transpose()?;
        data.heldout = data.heldout.as_ref().map(apply).transpose()?;
    }
    Ok((data, inputs.directions.clone()))
}

/// Pareto-optimal rows of each labeled set, in raw objective orientation.
pub fn write_pareto_csv<W: Write>(
    writer: W,
    sets: &[(&str, &DesignSet)],
    directions: &HashMap<String, ObjectiveDirection>,
) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let mut header_written = false;
    for (label, set) in sets {
        let perf = set.require_performance("pareto export")?;
        let names: Vec<String> = match set.names() {
            Some(n) if n.performance.len() == perf.ncols() => n.performance.clone(),
            _ => (0..perf.ncols()).map(|i| format!("f{i}")).collect(),
        };
        if !header_written {
            let mut header = vec!["set".to_string(), "index".to_string()];
            header.extend(names.iter().cloned());
            w.write_record(&header)?;
            header_written = true;
        }
        let signs: Vec<f64> = names
            .iter()
            .map(|n| directions.get(n).copied().unwrap_or_default().sign())
            .collect();
        for i in pareto_front(perf) {
            let mut rec = vec![label.to_string(), i.to_string()];
            rec.extend(perf.row(i).iter().zip(&signs).map(|(v, s)| (v * s + 0.0).to_string()));
            w.write_record(&rec)?;
        }
    }
    w.flush()?;
    Ok(())
}

/// Write `report.json` plus the optional curve and front files into `dir`.
pub fn write_outputs(
    dir: &Path,
    report: &MetricReport,
    curves: &[(&str, &PrCurve)],
    fronts: &[(&str, &DesignSet)],
    directions: &HashMap<String, ObjectiveDirection>,
) -> Result<()> {
    fs::create_dir_all(dir)?;
    report.write(&dir.join(REPORT_FILE))?;
    if !curves.is_empty() {
        write_pr_curve_csv(BufWriter::new(File::create(dir.join(PR_CURVE_FILE))?), curves)?;
    }
    if !fronts.is_empty() {
        write_pareto_csv(BufWriter::new(File::create(dir.join(PARETO_FILE))?), fronts, directions)?;
    }
    Ok(())
}

/// The `eval` command: load, validate, compute and write outputs.
pub fn run_eval(config_path: &Path) -> Result<(MetricReport, RunStatus)> {
    let config = EvalConfig::load(config_path)?;
    let base = config_path.parent().unwrap_or(Path::new("."));
    let (mut data, directions) = load_inputs(&config.inputs, base)?;
    data.problem = config.problem.clone();
    data.targets = config.targets.clone();
    data.conditioning = config.conditioning.clone();
    let evaluation = evaluate(&data, &config.metrics, RunSeed(config.seed))?;
    let out = resolve(base, config.output_dir.as_deref().unwrap_or(Path::new(".")));
    let curves: Vec<(&str, &PrCurve)> = evaluation.pr_curve.iter().map(|c| ("generated", c)).collect();
    let fronts: Vec<(&str, &DesignSet)> = match data.generated.performance() {
        Some(_) => vec![("generated", &data.generated)],
        None => Vec::new(),
    };
    write_outputs(&out, &evaluation.report, &curves, &fronts, &directions)?;
    let status = RunStatus::of(&evaluation.report);
    Ok((evaluation.report, status))
}

/// Synthetic benchmark problems available to `synth`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SynthProblem {
    Sixmode,
    Ring,
    Kno1,
}

impl std::str::FromStr for SynthProblem {
    type Err = EvalError;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "sixmode" | "six_mode" => Ok(SynthProblem::Sixmode),
            "ring" => Ok(SynthProblem::Ring),
            "kno1" => Ok(SynthProblem::Kno1),
            other => Err(EvalError::Config(format!("unknown problem `{other}` (sixmode, ring, kno1)"))),
        }
    }
}

/// Generate `n` designs. The ring problem yields `ceil(n/2)` valid and
/// `floor(n/2)` invalid rows, flagged in a `valid` column.
pub fn synthesize(problem: SynthProblem, n: usize, seed: RunSeed) -> Result<DesignSet> {
    match problem {
        SynthProblem::Sixmode => sample_sixmode(&SixModeSpec::default(), n, seed),
        SynthProblem::Kno1 => sample_kno1(n, seed),
        SynthProblem::Ring => {
            if n < 2 {
                return Err(EvalError::invalid("the ring problem needs n ≥ 2"));
            }
            let (valid, invalid) = sample_ring(&RingProblem::default(), n - n / 2, n / 2, seed)?;
            let designs = valid.designs().vstack(invalid.designs())?;
            let sdfs = valid.sdfs().expect("ring sets carry sdfs").vstack(invalid.sdfs().expect("ring sets carry sdfs"))?;
            let flags = valid.valid().into_iter().chain(invalid.valid()).flatten().copied().collect();
            let names = valid.names().cloned().unwrap_or_default();
            Ok(DesignSet::new(designs)?.with_sdfs(sdfs)?.with_valid(flags)?.with_names(names))
        }
    }
}

/// The `synth` command.
pub fn run_synth(problem: SynthProblem, n: usize, seed: u64, out: &Path) -> Result<()> {
    let set = synthesize(problem, n, RunSeed(seed))?;
    if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
        fs::create_dir_all(dir)?;
    }
    let file = BufWriter::new(File::create(out)?);
    write_design_set(file, &set, &HashMap::new())?;
    Ok(())
}
