use std::io::Write;
use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use photonic_bell_lab::args::{Cli, Format};
use photonic_bell_lab::error::CliError;
use photonic_bell_lab::record::write_atomic;

fn configure_threads() -> Result<(), CliError> {
    let Ok(raw) = std::env::var("PBL_THREADS") else {
        return Ok(());
    };
    let n: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Invalid(format!("PBL_THREADS must be a positive integer, got {raw:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Internal(e.to_string()))
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    configure_threads()?;
    let start = Instant::now();
    let mut rec = photonic_bell_lab::run(cli)?;
    if cli.params.timing {
        rec.duration_seconds = Some(start.elapsed().as_secs_f64());
    }
    let bytes = match cli.params.format {
        Format::Json => rec.to_json()?,
        Format::Csv => rec.to_csv()?,
    };
    match &cli.params.out {
        Some(path) => write_atomic(path, &bytes),
        None => std::io::stdout()
            .lock()
            .write_all(&bytes)
            .map_err(|e| CliError::Internal(e.to_string())),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match execute(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("photonic-bell-lab: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
