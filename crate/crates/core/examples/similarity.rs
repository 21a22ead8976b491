//! Statistical similarity between a dataset and generated designs.
//!
//! Run with `cargo run --example similarity`.

use design_eval::distance::{Bandwidth, DistanceSpec};
use design_eval::seed::RunSeed;
use design_eval::similarity::{
    f_beta, ml_efficacy, mmd, nearest_datapoint, pr_auc, prd_curve, rediscovery, MmdEstimator, PrdSettings,
};
use design_eval::synth::{sample_sixmode, SixModeSpec};
use design_eval::Result;

fn mean(v: &[f64]) -> f64 {
    v.iter().sum::<f64>() / v.len() as f64
}

fn main() -> Result<()> {
    let spec = SixModeSpec::default();
    let data = sample_sixmode(&spec, 1000, RunSeed(1))?;
    let heldout = sample_sixmode(&spec, 200, RunSeed(2))?;
    let close = sample_sixmode(&spec, 500, RunSeed(3))?;
    // only the two large modes: good precision, poor recall
    let collapsed = sample_sixmode(
        &SixModeSpec {
            weights: vec![1.0, 1.0, 1e-9, 1e-9, 1e-9, 1e-9],
            ..spec.clone()
        },
        500,
        RunSeed(4),
    )?;

    let euclid = DistanceSpec::Euclidean;
    for (label, gen) in [("same distribution", &close), ("mode collapse", &collapsed)] {
        let g = gen.designs();
        let m = mmd(data.designs(), g, Bandwidth::MedianHeuristic, MmdEstimator::Biased, RunSeed(5))?;
        let curve = prd_curve(data.designs(), g, PrdSettings::default(), RunSeed(6))?;
        let conds = |s: &design_eval::data::DesignSet| s.conditions().unwrap().clone();
        let efficacy = ml_efficacy(g, &conds(gen), data.designs(), &conds(&data), 5, &euclid)?;
        println!("{label}:");
        println!("  MMD {:.4} (sigma {:.3})", m.value, m.sigma);
        println!(
            "  F1 {:.3}  F0.1 {:.3}  F10 {:.3}  PR-AUC {:.3}",
            f_beta(&curve, 1.0),
            f_beta(&curve, 0.1),
            f_beta(&curve, 10.0),
            pr_auc(&curve)
        );
        println!("  mean nearest datapoint {:.4}", mean(&nearest_datapoint(g, data.designs(), &euclid)?));
        println!(
            "  mean rediscovery distance {:.4}",
            mean(&rediscovery(heldout.designs(), g, 500, &euclid, RunSeed(7))?)
        );
        println!("  ML efficacy (R^2 of condition regression) {efficacy:.3}");
    }
    Ok(())
}
