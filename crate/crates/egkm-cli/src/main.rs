//! The `egkm` command: `run` executes a benchmark manifest, `explain` prints
//! the seeding pipeline's full trace for one dataset, and `fixtures` writes
//! the bundled reference data. Exit codes: 0 success, 1 usage error, 2 data
//! error, 3 internal invariant violation.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use egkm::{SortKey, Technique};

use egkm_cli::emit::write_outputs;
use egkm_cli::experiment::{run_experiment, ExperimentSpec, OutputFormat, DEFAULT_REPETITIONS};
use egkm_cli::explain::{explain_dataset, ExplainOptions};
use egkm_cli::fixtures::{write_benchmark_standins, write_reference_fixtures};
use egkm_cli::manifest::load_manifest;
use egkm_cli::CliError;

#[derive(Parser)]
#[command(name = "egkm", version, about = "Deterministic clustering benchmark harness")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Run the benchmark protocol over a dataset manifest.
    Run(RunArgs),
    /// Print the seeding pipeline's intermediate tables for one CSV file.
    Explain(ExplainArgs),
    /// Write the bundled reference sets (and optionally synthetic benchmark
    /// datasets) to disk.
    Fixtures(FixturesArgs),
}

#[derive(Args)]
struct RunArgs {
    /// Manifest listing the datasets to benchmark.
    #[arg(long)]
    manifest: PathBuf,
    /// Comma-separated techniques: eg_kmeans, kmeans_random, kmeans_pp.
    #[arg(long, value_delimiter = ',', default_values_t = [
        "eg_kmeans".to_string(),
        "kmeans_random".to_string(),
        "kmeans_pp".to_string(),
    ])]
    techniques: Vec<String>,
    /// Repetitions per (dataset, technique) pair.
    #[arg(long, default_value_t = DEFAULT_REPETITIONS)]
    reps: usize,
    /// Base seed; repetition r uses seed + r.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Directory the report files are written into.
    #[arg(long, default_value = "report")]
    out: PathBuf,
    /// Comma-separated output formats: markdown, csv, plotdata.
    #[arg(long, value_delimiter = ',', default_values_t = [
        "markdown".to_string(),
        "csv".to_string(),
        "plotdata".to_string(),
    ])]
    formats: Vec<String>,
}

#[derive(Args)]
struct ExplainArgs {
    /// CSV file to walk through (every column is a feature).
    #[arg(long)]
    data: PathBuf,
    /// Sort key: value_1d, l2_norm, or feature_sum (default: by dimension).
    #[arg(long)]
    key: Option<String>,
    /// Scaling constant applied to fractional sort keys.
    #[arg(long, default_value_t = 10)]
    ac: u64,
}

#[derive(Args)]
struct FixturesArgs {
    /// Directory the fixture files are written into.
    #[arg(long, default_value = "fixtures")]
    out: PathBuf,
    /// Also generate the synthetic benchmark datasets under <out>/standins.
    #[arg(long)]
    standins: bool,
}

fn main() -> ExitCode {
    match std::panic::catch_unwind(real_main) {
        Ok(Ok(())) => ExitCode::SUCCESS,
        Ok(Err(err)) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code() as u8)
        }
        // The panic itself has already been printed by the default hook.
        Err(_) => ExitCode::from(3),
    }
}

fn real_main() -> Result<(), CliError> {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(err)
            if matches!(
                err.kind(),
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion
            ) =>
        {
            print!("{err}");
            return Ok(());
        }
        Err(err) => return Err(CliError::Usage(err.to_string())),
    };

    match cli.command {
        Command::Run(args) => run(args),
        Command::Explain(args) => explain(args),
        Command::Fixtures(args) => fixtures(args),
    }
}

fn run(args: RunArgs) -> Result<(), CliError> {
    let techniques: Vec<Technique> = args
        .techniques
        .iter()
        .map(|s| s.parse::<Technique>().map_err(CliError::from))
        .collect::<Result<_, _>>()?;
    let formats: Vec<OutputFormat> =
        args.formats.iter().map(|s| s.parse()).collect::<Result<_, _>>()?;
    let datasets = load_manifest(&args.manifest)?;

    let spec = ExperimentSpec {
        datasets,
        techniques,
        repetitions: args.reps,
        base_seed: args.seed,
        output_dir: args.out,
        output_formats: formats,
    };
    let report = run_experiment(&spec)?;
    let written = write_outputs(&report, &spec.output_dir, &spec.output_formats)?;

    let failures = report.rows.iter().filter(|r| r.error.is_some()).count();
    if failures > 0 {
        eprintln!("{failures} of {} rows failed; see the report for details", report.rows.len());
    }
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}

fn explain(args: ExplainArgs) -> Result<(), CliError> {
    let sort_key = args
        .key
        .as_deref()
        .map(|s| s.parse::<SortKey>().map_err(CliError::from))
        .transpose()?;
    let options = ExplainOptions { sort_key, arbitrary_constant: args.ac };
    let text = explain_dataset(&args.data, &options)?;
    print!("{text}");
    Ok(())
}

fn fixtures(args: FixturesArgs) -> Result<(), CliError> {
    let mut written = write_reference_fixtures(&args.out)?;
    if args.standins {
        written.extend(write_benchmark_standins(&args.out.join("standins"))?);
    }
    for path in written {
        println!("wrote {}", path.display());
    }
    Ok(())
}
