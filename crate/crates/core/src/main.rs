use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use design_eval::cli::{run_demo, run_eval, run_synth, Experiment, RunStatus, SynthProblem};
use design_eval::Result;

/// Worker thread count for parallel metric execution. Unset means one per core.
const THREADS_VAR: &str = "DESIGN_EVAL_THREADS";

#[derive(Parser)]
#[command(name = "design-eval", version, about = "Evaluate generated design sets")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the metric battery described by a JSON config.
    Eval {
        #[arg(long)]
        config: PathBuf,
    },
    /// Write a synthetic problem sample as CSV (sixmode, ring or kno1).
    Synth {
        problem: SynthProblem,
        #[arg(long)]
        n: usize,
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run a demonstration battery with two stand-in models.
    Demo {
        experiment: Experiment,
        #[arg(long)]
        seed: u64,
        /// Directory for report.json and the CSV artifacts.
        #[arg(long, default_value = ".")]
        out: PathBuf,
    },
}

fn configure_threads() -> Result<()> {
    let Ok(raw) = std::env::var(THREADS_VAR) else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .map_err(|_| design_eval::EvalError::Config(format!("{THREADS_VAR} must be a positive integer, got `{raw}`")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| design_eval::EvalError::Config(e.to_string()))
}

fn run(cli: Cli) -> Result<RunStatus> {
    configure_threads()?;
    match cli.command {
        Command::Eval { config } => {
            let (_, status) = run_eval(&config)?;
            Ok(status)
        }
        Command::Synth { problem, n, seed, out } => {
            run_synth(problem, n, seed, &out)?;
            Ok(RunStatus::Complete)
        }
        Command::Demo { experiment, seed, out } => {
            let output = run_demo(experiment, seed)?;
            output.write(&out)?;
            Ok(RunStatus::of(&output.report))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // keep exit code 2 for "completed with metric errors"
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(status) => {
            if status == RunStatus::CompletedWithMetricErrors {
                eprintln!("completed with metric errors, see report.json");
            }
            ExitCode::from(status.exit_code() as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
