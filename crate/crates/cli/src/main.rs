use std::process::ExitCode;

use clap::Parser;

use vgl_cli::args::Cli;
use vgl_cli::commands::{run, Status};
use vgl_cli::error::CliError;

fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var("VGL_THREADS") else {
        return Ok(());
    };
    let threads: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Config(format!("VGL_THREADS must be a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(threads)
        .build_global()
        .map_err(|e| CliError::Config(format!("cannot configure thread pool: {e}")))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match configure_threads().and_then(|()| run(&cli.command)) {
        Ok(Status::Success) => ExitCode::SUCCESS,
        Ok(Status::ContractFailure) => ExitCode::from(1),
        Err(e) => {
            eprintln!("vgl: {e}");
            e.exit_code()
        }
    }
}
