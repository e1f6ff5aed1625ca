use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use dualball::lab::{run, write_outputs, Experiment, ExperimentConfig};
use dualball::Error;

#[derive(Parser)]
#[command(name = "dualball-lab", version, about = "Seeded experiments on dual-ball retractions and norm-attaining perturbations")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Moduli of monotonicity and convexity on a grid.
    Modulus(RunArgs),
    /// Empirical modulus of continuity of a retraction against its bound.
    Continuity(RunArgs),
    /// Bishop-Phelps-Bollobás witnesses for random functionals.
    Bpb(RunArgs),
    /// Norm-attaining perturbations of random operators into C(K).
    Perturb(RunArgs),
    /// Convex-series estimate on random tuples.
    Lemma(RunArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Experiment config (JSON).
    #[arg(long)]
    config: PathBuf,
    /// Override the config seed.
    #[arg(long)]
    seed: Option<u64>,
    /// Override the config sample count.
    #[arg(long)]
    samples: Option<usize>,
    /// Override the CSV output path.
    #[arg(long)]
    out: Option<PathBuf>,
}

const EXIT_CONFIG: u8 = 2;
const EXIT_PROPERTY: u8 = 3;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (expected, args) = match cli.command {
        Command::Modulus(a) => (Experiment::Modulus, a),
        Command::Continuity(a) => (Experiment::RetractionContinuity, a),
        Command::Bpb(a) => (Experiment::Bpb, a),
        Command::Perturb(a) => (Experiment::Perturbation, a),
        Command::Lemma(a) => (Experiment::ConvexLemma, a),
    };
    let config = match load(&args, expected) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(EXIT_CONFIG);
        }
    };
    let report = match run(&config) {
        Ok(r) => r,
        Err(e) => {
            eprintln!("error: {e}");
            let code = if matches!(e, Error::ConfigInvalid(_)) { EXIT_CONFIG } else { 1 };
            return ExitCode::from(code);
        }
    };
    if let Err(e) = write_outputs(&config, &report) {
        eprintln!("error: {e}");
        return ExitCode::from(1);
    }
    println!(
        "{}: {} rows, {} failing -> {}",
        expected.subcommand(),
        report.rows,
        report.failures,
        config.output_path.display()
    );
    if report.passed() {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(EXIT_PROPERTY)
    }
}

fn load(args: &RunArgs, expected: Experiment) -> Result<ExperimentConfig, Error> {
    let mut config = ExperimentConfig::load(&args.config)?;
    if config.experiment != expected {
        return Err(Error::ConfigInvalid(format!(
            "config describes a {:?} experiment, run it with `{}`",
            config.experiment,
            config.experiment.subcommand()
        )));
    }
    if let Some(seed) = args.seed {
        config.seed = seed;
    }
    if let Some(samples) = args.samples {
        config.samples = samples;
    }
    if let Some(out) = &args.out {
        config.output_path = out.clone();
    }
    config.validate()?;
    Ok(config)
}
