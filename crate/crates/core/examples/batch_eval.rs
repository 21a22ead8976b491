//! Build an evaluation config in code and run a mixed metric battery,
//! the same path the `eval` command takes.

use design_eval::cli::{evaluate, validate, EvalConfig, EvalData, Problem};
use design_eval::quality::TargetSpec;
use design_eval::seed::RunSeed;
use design_eval::synth::sample_kno1;
use design_eval::Result;

fn main() -> Result<()> {
    let config = EvalConfig::from_json(
        r#"{
            "seed": 7,
            "inputs": {"generated": "unused.csv"},
            "metrics": [
                {"metric": "mmd"},
                {"metric": "recall_f10", "clusters": 10},
                {"metric": "convex_hull"},
                {"metric": "hypervolume"},
                {"metric": "dtai"},
                {"metric": "optimality_gap", "scalarization": {"kind": "weighted_sum", "weights": [1.0, 1.0]}}
            ]
        }"#,
    )?;

    let mut data = EvalData::new(sample_kno1(150, RunSeed(1))?);
    data.dataset = Some(sample_kno1(600, RunSeed(2))?);
    data.problem = Some(Problem::Kno1);

    // dtai has no targets yet, so validation refuses to start
    if let Err(e) = validate(&data, &config.metrics) {
        println!("before targets: {e}");
    }
    data.targets = Some(TargetSpec::new(vec![0.5, 0.5]));
    let evaluation = evaluate(&data, &config.metrics, RunSeed(config.seed))?;
    print!("{}", evaluation.report.to_json()?);
    Ok(())
}
