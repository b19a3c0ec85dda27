//! `nanotube` command-line front end.

mod args;
mod commands;
mod error;
mod output;

use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Bands(a) => commands::cmd_bands(a),
        Command::Sweep(a) => commands::cmd_sweep(a),
        Command::Asym(a) => commands::cmd_asym(a),
        Command::Verify(a) => commands::cmd_verify(a),
        Command::Geometry(a) => commands::cmd_geometry(a),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
