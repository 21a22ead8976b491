//! Configuration-driven evaluation, synthesis and demos behind the binary.

mod commands;
mod config;
mod demo;
mod engine;

pub use commands::{
    load_input, load_inputs, run_eval, run_synth, synthesize, write_outputs, write_pareto_csv, RunStatus,
    SynthProblem, PARETO_FILE, PR_CURVE_FILE, REPORT_FILE,
};
pub use config::*;
pub use demo::{perturbed_resample, run_demo, DemoOutput, Experiment, DEMO_DATA, DEMO_GENERATED, DEMO_HELDOUT};
pub use engine::{evaluate, validate, EvalData, Evaluation, KNO1_FRONT_GRID};
