//! Conditional generation: adherence to a requested condition and
//! conditional-vs-marginal reference sets.

use design_eval::conditioning::{conditional_prior, conditioning_adherence, ConditionQuery};
use design_eval::distance::Bandwidth;
use design_eval::seed::RunSeed;
use design_eval::similarity::{mmd, MmdEstimator};
use design_eval::synth::{sample_sixmode, SixModeSpec};
use design_eval::{Matrix, Result};

fn main() -> Result<()> {
    let spec = SixModeSpec::default();
    let data = sample_sixmode(&spec, 2000, RunSeed(1))?;
    let query = ConditionQuery::new(vec![0.3]);
    let prior = conditional_prior(&data, &query)?;
    println!("conditional prior: {} of {} datapoints closest to c = 0.3", prior.len(), data.len());

    // one "model" that honours the condition and one that ignores it
    let follows = sample_sixmode(&spec, 4000, RunSeed(2))?;
    let keep: Vec<usize> = (0..follows.len())
        .filter(|&i| (follows.conditions().unwrap().get(i, 0) - 0.3).abs() < 0.01)
        .take(300)
        .collect();
    let follows = follows.select(&keep)?;
    let ignores = sample_sixmode(&spec, 300, RunSeed(3))?;

    let cond_fn = |x: &[f64]| -> std::result::Result<Vec<f64>, String> { Ok(vec![spec.condition(x)]) };
    let score = |g: &Matrix, reference: &Matrix| {
        mmd(reference, g, Bandwidth::MedianHeuristic, MmdEstimator::Biased, RunSeed(4)).map(|r| r.value)
    };
    for (label, g) in [("follows condition", &follows), ("ignores condition", &ignores)] {
        let adherence = conditioning_adherence(g.designs(), &query, &cond_fn)?;
        println!("{label}:");
        println!("  adherence (squared condition error) {:.5}", adherence.mean);
        println!("  MMD vs conditional prior {:.4}", score(g.designs(), prior.designs())?);
        println!("  MMD vs full dataset      {:.4}", score(g.designs(), data.designs())?);
    }
    Ok(())
}
