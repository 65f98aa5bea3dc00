//! `biortho`: simulate ideal von Neumann measurements, decompose the
//! entangled outcomes, and check which decomposition the apparatus
//! dynamics selects.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand, ValueEnum};

use biortho::cli::{exit_code_for, run_command, CommandKind, Overrides};

#[derive(Parser)]
#[command(
    name = "biortho",
    version,
    about = "Von Neumann measurement models and biorthonormal decompositions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evolve the configured system state through the interaction
    Simulate(CommonArgs),
    /// Biorthonormal decomposition of the post-interaction state
    Schmidt(CommonArgs),
    /// Extract the calibrated system basis and pointer states
    Calibrate(CommonArgs),
    /// Score rival decompositions against the dynamical calibration
    Ambiguity(CommonArgs),
    /// Build the counterfactual apparatus for the file's pointer targets
    Compare(CommonArgs),
}

#[derive(Args)]
struct CommonArgs {
    /// Model description file (JSON)
    file: PathBuf,
    /// Output format
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Degeneracy grouping tolerance, relative to the largest coefficient
    #[arg(long)]
    tolerance: Option<f64>,
    /// Seed for the randomized extraction step
    #[arg(long)]
    seed: Option<u64>,
    /// Cutoff below which Schmidt coefficients are dropped
    #[arg(long)]
    cutoff: Option<f64>,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Text,
    Json,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // Help and version requests are successes; anything else is a
            // usage error, which exits 1 by this tool's convention.
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 1,
            };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };

    let (kind, args) = match &cli.command {
        Command::Simulate(a) => (CommandKind::Simulate, a),
        Command::Schmidt(a) => (CommandKind::Schmidt, a),
        Command::Calibrate(a) => (CommandKind::Calibrate, a),
        Command::Ambiguity(a) => (CommandKind::Ambiguity, a),
        Command::Compare(a) => (CommandKind::Compare, a),
    };
    let overrides = Overrides {
        tolerance: args.tolerance,
        seed: args.seed,
        cutoff: args.cutoff,
    };

    match run_command(kind, &args.file, &overrides) {
        Ok(report) => {
            match args.format {
                Format::Text => print!("{}", report.render_text()),
                Format::Json => print!("{}", report.render_json()),
            }
            for note in &report.diagnostics.notes {
                eprintln!("note: {}", note);
            }
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("biortho: error: {}", e);
            ExitCode::from(exit_code_for(&e) as u8)
        }
    }
}
