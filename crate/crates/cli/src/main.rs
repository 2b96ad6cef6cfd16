mod args;
mod commands;
mod error;
mod grid;
mod input;
mod output;

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::Parser;

use args::{Cli, Command};
use commands::Context;
use error::CliResult;

fn run(cli: Cli) -> CliResult<()> {
    let ctx = Context::new(cli.format, cli.seed, cli.precision)?;
    let mut out: Box<dyn Write> = match &cli.output {
        Some(path) => Box::new(BufWriter::new(File::create(path)?)),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    };
    match &cli.command {
        Command::Test(args) => commands::run_test(args, &ctx, &mut out)?,
        Command::Tables { kind } => commands::run_tables(kind, &ctx, &mut out)?,
        Command::Simulate { kind } => commands::run_simulate(kind, &ctx, &mut out)?,
        Command::Oracle(args) => commands::run_oracle(args, &ctx, &mut out)?,
    }
    out.flush()?;
    Ok(())
}

fn main() -> ExitCode {
    // clap exits with status 2 on usage errors
    let cli = Cli::parse();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
