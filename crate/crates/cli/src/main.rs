mod cli;
mod commands;
mod input;
mod record;
mod run;

use std::process::ExitCode;

use clap::Parser;
use fj_core::{par, Error};

use cli::{Cli, Command};

const EXIT_USAGE: u8 = 2;
const EXIT_NUMERICAL: u8 = 3;
const EXIT_IO: u8 = 4;

fn exit_code(err: &anyhow::Error) -> u8 {
    for cause in err.chain() {
        if let Some(e) = cause.downcast_ref::<Error>() {
            return match e {
                Error::Io(_) => EXIT_IO,
                e if e.is_numerical() => EXIT_NUMERICAL,
                _ => EXIT_USAGE,
            };
        }
        if cause.downcast_ref::<std::io::Error>().is_some() {
            return EXIT_IO;
        }
        if let Some(e) = cause.downcast_ref::<csv::Error>() {
            if e.is_io_error() {
                return EXIT_IO;
            }
        }
        if let Some(e) = cause.downcast_ref::<serde_json::Error>() {
            if e.is_io() {
                return EXIT_IO;
            }
        }
    }
    EXIT_USAGE
}

fn dispatch(command: &Command) -> anyhow::Result<()> {
    match command {
        Command::Solve(a) => commands::solve(a),
        Command::Compare(a) => commands::compare(a),
        Command::Bench(a) => commands::bench(a),
        Command::SweepOmega(a) => commands::sweep_omega(a),
        Command::Gen(a) => commands::gen(a),
        Command::Metrics(a) => commands::metrics(a),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match cli.workers {
        Some(0) => Err(anyhow::anyhow!(Error::InvalidParameter(
            "--workers must be at least 1".into()
        ))),
        Some(k) => par::with_workers(k, || dispatch(&cli.command)),
        None => dispatch(&cli.command),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(exit_code(&e))
        }
    }
}
