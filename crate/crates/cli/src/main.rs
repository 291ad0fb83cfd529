//! `jsnr`: effectiveness analysis, numerical ranges and witnesses for sets of
//! reference product states.

mod commands;
mod demo;
mod error;
mod input;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use jsnr_core::tol;

#[derive(Parser, Debug)]
#[command(
    name = "jsnr",
    version,
    about = "Entanglement detection from multiple fidelity measurements"
)]
struct Cli {
    /// Base seed for every randomized search.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// CES tolerance: a subspace is certified when its best product overlap is below 1 - tol.
    #[arg(long, global = true, default_value_t = tol::CES)]
    tol: f64,
    /// Write the JSON report and artifacts into this directory.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Suppress the human-readable summary and warnings.
    #[arg(long, global = true)]
    quiet: bool,
    /// Record wall time in the report (breaks byte-identical reruns).
    #[arg(long, global = true)]
    timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide whether the reference set is effective, and report every pair.
    Analyze { input: PathBuf },
    /// Analytic and sampled JNR/JSNR of two references.
    Range {
        input: PathBuf,
        #[arg(long, value_enum, default_value_t = ModeArg::Both)]
        mode: ModeArg,
        /// Support directions of the sampled construction.
        #[arg(long, default_value_t = 360)]
        directions: usize,
        /// Boundary samples per branch for both analytic constructions.
        #[arg(long)]
        density: Option<usize>,
        /// Separable maximizer used by the sampled JSNR.
        #[arg(long, value_enum, default_value_t = MethodArg::Seesaw)]
        method: MethodArg,
        /// Vertex CSV; with `--mode both` the mode is appended to the stem.
        #[arg(long)]
        csv: Option<PathBuf>,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Build the fidelity witness along a direction.
    Witness {
        input: PathBuf,
        /// Comma-separated weights, one per reference.
        #[arg(long, required = true, value_delimiter = ',', allow_hyphen_values = true)]
        direction: Vec<f64>,
        #[arg(long, value_enum, default_value_t = MethodArg::Seesaw)]
        method: MethodArg,
    },
    /// Classify measured fidelity tuples against the ranges of two references.
    Classify {
        input: PathBuf,
        /// Comma-separated pair `x1,x2`; tuples in the input document are classified too.
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        tuple: Option<Vec<f64>>,
        /// Distance slack of the polygonal regions.
        #[arg(long, default_value_t = tol::CLASSIFY)]
        classify_tol: f64,
        #[arg(long)]
        svg: Option<PathBuf>,
    },
    /// Run a bundled demonstration.
    Demo {
        #[arg(value_enum)]
        name: DemoName,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "snake_case")]
enum ModeArg {
    Jnr,
    Jsnr,
    Both,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "snake_case")]
enum MethodArg {
    Seesaw,
    Grid,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, serde::Serialize)]
#[serde(rename_all = "kebab-case")]
enum DemoName {
    Example1,
    TilesUpb,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let ctx = commands::Context::new(cli.seed, cli.tol, cli.out.clone(), cli.quiet, cli.timing);
    let outcome = ctx.validate().and_then(|_| match cli.command {
        Command::Analyze { input } => commands::analyze(&ctx, &input),
        Command::Range {
            input,
            mode,
            directions,
            density,
            method,
            csv,
            svg,
        } => commands::range(
            &ctx,
            &input,
            &commands::RangeArgs {
                mode,
                directions,
                density,
                method,
                csv,
                svg,
            },
        ),
        Command::Witness {
            input,
            direction,
            method,
        } => commands::witness(&ctx, &input, &direction, method),
        Command::Classify {
            input,
            tuple,
            classify_tol,
            svg,
        } => commands::classify(&ctx, &input, tuple.as_deref(), classify_tol, svg.as_deref()),
        Command::Demo { name } => demo::run(&ctx, name),
    });
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code)
        }
    }
}
