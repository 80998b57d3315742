use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use qubit_film::sweep::{
    load_config, map_csv, rates_csv, run_concurrence_map, run_rate_spectrum, run_special_wavelengths,
    special_csv, write_output, SpecialWavelength, SweepConfig,
};
use qubit_film::Error;

const EXIT_IO: u8 = 1;
const EXIT_CONFIG: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;

/// Collective rates and two-emitter concurrence across a thin film.
#[derive(Parser)]
#[command(name = "simulate", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// γ_s, γ_c, Ω_c and the transmission proxy over the wavelength grid.
    Rates {
        #[arg(long)]
        config: PathBuf,
    },
    /// Concurrence map over the wavelength × time grid.
    Concurrence {
        #[arg(long)]
        config: PathBuf,
    },
    /// ENZ, ENP and surface-plasmon wavelengths of the film material.
    SpecialWavelengths {
        #[arg(long)]
        config: PathBuf,
    },
}

fn load(path: &Path) -> Result<SweepConfig, ExitCode> {
    load_config(path).map_err(|e| {
        eprintln!("simulate: {e}");
        ExitCode::from(EXIT_CONFIG)
    })
}

fn fail(e: Error) -> ExitCode {
    eprintln!("simulate: {e}");
    match e {
        Error::Config(_) => ExitCode::from(EXIT_CONFIG),
        Error::Io { .. } => ExitCode::from(EXIT_IO),
        _ => ExitCode::from(EXIT_NUMERICAL),
    }
}

fn report_failures<'a>(rows: impl Iterator<Item = (f64, &'a Option<String>)>) -> (usize, usize) {
    let mut total = 0;
    let mut failed = 0;
    for (lambda, failure) in rows {
        total += 1;
        if let Some(msg) = failure {
            failed += 1;
            eprintln!("simulate: warning: lambda = {lambda} nm: {msg}");
        }
    }
    (total, failed)
}

fn rates(path: &Path) -> Result<(), ExitCode> {
    let config = load(path)?;
    let rows = run_rate_spectrum(&config).map_err(fail)?;
    let (total, failed) = report_failures(rows.iter().map(|r| (r.lambda_nm, &r.failure)));
    write_output(config.output.rates.as_deref(), &rates_csv(&rows)).map_err(fail)?;
    if failed == total {
        eprintln!("simulate: every wavelength failed");
        return Err(ExitCode::from(EXIT_NUMERICAL));
    }
    Ok(())
}

fn concurrence(path: &Path) -> Result<(), ExitCode> {
    let config = load(path)?;
    let map = run_concurrence_map(&config).map_err(fail)?;
    let (total, failed) = report_failures(map.rates.iter().map(|r| (r.lambda_nm, &r.failure)));
    write_output(config.output.concurrence.as_deref(), &map_csv(&map)).map_err(fail)?;
    if failed == total {
        eprintln!("simulate: every wavelength failed");
        return Err(ExitCode::from(EXIT_NUMERICAL));
    }
    Ok(())
}

fn special_wavelengths(path: &Path) -> Result<(), ExitCode> {
    let config = load(path)?;
    let results = run_special_wavelengths(&config);
    let mut found = Vec::new();
    for (kind, result) in &results {
        match result {
            Ok(lambda_nm) => found.push(SpecialWavelength {
                kind: *kind,
                lambda_nm: *lambda_nm,
            }),
            Err(e) => eprintln!("simulate: warning: {}: {e}", kind.label()),
        }
    }
    write_output(config.output.special_wavelengths.as_deref(), &special_csv(&found)).map_err(fail)?;
    if !results.is_empty() && found.is_empty() {
        return Err(ExitCode::from(EXIT_NUMERICAL));
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Rates { config } => rates(config),
        Command::Concurrence { config } => concurrence(config),
        Command::SpecialWavelengths { config } => special_wavelengths(config),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(code) => code,
    }
}
