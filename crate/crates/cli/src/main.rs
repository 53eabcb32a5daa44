//! `exciton-sae`: spectra, f(α) tables, eigenfunctions, scattering scans and
//! oracle comparisons for the self-adjoint extensions of the strong-field
//! exciton Hamiltonian.

mod commands;
mod config;
mod table;

use std::process::ExitCode;

use clap::{Parser, Subcommand};

use config::{load_file, Flags, RunConfig};

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("config error: {0}")]
    Config(String),
    #[error("numeric failure: {0}")]
    Numeric(String),
    #[error("oracle mismatch: {0}")]
    Mismatch(String),
}

impl CliError {
    fn code(&self) -> u8 {
        match self {
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
            CliError::Mismatch(_) => 4,
        }
    }
}

#[derive(Parser)]
#[command(
    name = "exciton-sae",
    version,
    about = "Self-adjoint extension spectra and scattering for the strong-field exciton"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Bound states (n, alpha, energy, norm_constant) for branches 0..nmax.
    Spectrum(Flags),
    /// The spectral function f(alpha) with a pole/zero sidecar.
    Fplot(Flags),
    /// A normalized eigenfunction on 0 <= z <= zmax.
    Eigenfunction(Flags),
    /// Scattering coefficients and phase shift on a log energy grid.
    Scattering(Flags),
    /// Compare Whittaker and shooting eigenvalues branch by branch.
    Oracle(Flags),
}

fn config(flags: Flags) -> Result<RunConfig, CliError> {
    let merged = match &flags.config {
        Some(path) => {
            let file = load_file(path)?;
            flags.over(file)
        }
        None => flags,
    };
    RunConfig::from_flags(merged)
}

type Cmd = fn(&RunConfig) -> Result<table::Output, CliError>;

fn run(cli: Cli) -> Result<(), CliError> {
    let (flags, cmd): (Flags, Cmd) = match cli.command {
        Command::Spectrum(f) => (f, commands::spectrum),
        Command::Fplot(f) => (f, commands::fplot),
        Command::Eigenfunction(f) => (f, commands::eigenfunction_table),
        Command::Scattering(f) => (f, commands::scattering),
        Command::Oracle(f) => {
            let cfg = config(f)?;
            let report = commands::oracle(&cfg)?;
            report
                .output
                .emit(cfg.output_format, cfg.output_path.as_deref())?;
            if report.failures > 0 {
                return Err(CliError::Mismatch(format!(
                    "{} levels differ by more than {:e}",
                    report.failures,
                    commands::ORACLE_THRESHOLD
                )));
            }
            return Ok(());
        }
    };
    let cfg = config(flags)?;
    let out = cmd(&cfg)?;
    out.emit(cfg.output_format, cfg.output_path.as_deref())
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
