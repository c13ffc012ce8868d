use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use modal_split::cli::{self, CommonOpts, OutputFormat};

#[derive(Parser)]
#[command(
    name = "modal-split",
    version,
    about = "Bimodal modal-split laboratory: feasibility checks, equilibrium solves, \
             day-by-day simulations, Yule wealth processes, and parameter sweeps"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate feasibility conditions (1)-(5) of the model instance.
    Check(CommonArgs),
    /// Solve for the equilibrium car share and emit the iteration trace,
    /// cobweb polyline, curves, and an SVG of the staircase.
    Solve(CommonArgs),
    /// Run the finite-population day-by-day simulation.
    Simulate(CommonArgs),
    /// Run the coin-allocation wealth process and fit its tail exponent.
    Yule(CommonArgs),
    /// Re-check conditions and re-solve across a one-parameter grid.
    Sweep(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Path to the TOML run configuration.
    #[arg(long)]
    config: PathBuf,
    /// Directory for emitted files.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Overrides the seed of the consumed config block.
    #[arg(long)]
    seed: Option<u64>,
    /// What to print on stdout.
    #[arg(long, value_enum, default_value_t = FormatArg::Csv)]
    format: FormatArg,
}

#[derive(Clone, Copy, ValueEnum)]
enum FormatArg {
    /// Human-readable summary lines (files are CSV either way).
    Csv,
    /// One JSON object with full double precision.
    JsonSummary,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (common, run) = match &cli.command {
        Command::Check(c) => (c, cli::cmd_check as CommandFn),
        Command::Solve(c) => (c, cli::cmd_solve as CommandFn),
        Command::Simulate(c) => (c, cli::cmd_simulate as CommandFn),
        Command::Yule(c) => (c, cli::cmd_yule as CommandFn),
        Command::Sweep(c) => (c, cli::cmd_sweep as CommandFn),
    };
    let opts = CommonOpts {
        out_dir: common.out.clone(),
        seed_override: common.seed,
        format: match common.format {
            FormatArg::Csv => OutputFormat::Csv,
            FormatArg::JsonSummary => OutputFormat::JsonSummary,
        },
    };
    let config = match cli::load_config(&common.config) {
        Ok(config) => config,
        Err(err) => {
            eprintln!("error: {}", err.message);
            return ExitCode::from(err.exit_code as u8);
        }
    };
    match run(&config, &opts) {
        Ok(code) => ExitCode::from(code as u8),
        Err(err) => {
            eprintln!("error: {}", err.message);
            ExitCode::from(err.exit_code as u8)
        }
    }
}

type CommandFn = fn(&cli::RunConfig, &CommonOpts) -> Result<i32, cli::CliError>;
