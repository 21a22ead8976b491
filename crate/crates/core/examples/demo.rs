//! The five demonstration batteries, comparing two stand-in models built by
//! resampling the training data with small and large Gaussian noise.

use design_eval::cli::{run_demo, Experiment};
use design_eval::Result;

fn main() -> Result<()> {
    for experiment in Experiment::ALL {
        let out = run_demo(experiment, 42)?;
        println!("== {}", experiment.name());
        for (name, entry) in out.report.iter() {
            match (entry.value, &entry.error) {
                (Some(v), _) => println!("  {name:<45} {v:>10.4}"),
                (None, Some(e)) => println!("  {name:<45} error: {e}"),
                _ => {}
            }
        }
    }
    Ok(())
}
