//! `qcoherence` command-line tool.
//!
//! Exit codes: 0 success, 1 a hard verification suite failed, 2 malformed
//! input or parameter out of range, 3 input violates a state invariant,
//! 4 the optimizer did not converge (the value is still written).

mod args;
mod commands;

use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = args::Cli::parse();
    match commands::run(&cli) {
        Ok(status) => ExitCode::from(status as u8),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.status as u8)
        }
    }
}
