use std::process::ExitCode;
use std::time::Instant;

use clap::Parser;

use lfgt_cli::error::CliError;
use lfgt_cli::{cli::Cli, emit, run};

fn main() -> ExitCode {
    let args = Cli::parse();
    let started = Instant::now();
    let result = std::panic::catch_unwind(std::panic::AssertUnwindSafe(|| run(&args)))
        .unwrap_or_else(|panic| {
            let msg = panic
                .downcast_ref::<&str>()
                .map(|s| s.to_string())
                .or_else(|| panic.downcast_ref::<String>().cloned())
                .unwrap_or_else(|| "unexpected panic".into());
            Err(CliError::Internal(msg))
        });
    match result {
        Ok((command, inputs, outcome)) => {
            let code = emit(args.json, command, inputs, &outcome, started);
            ExitCode::from(u8::try_from(code).unwrap_or(3))
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(u8::try_from(err.exit_code()).unwrap_or(3))
        }
    }
}
