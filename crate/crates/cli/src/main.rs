use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    ExitCode::from(ewkit_cli::run(ewkit_cli::Cli::parse()))
}
