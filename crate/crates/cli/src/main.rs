mod cli;
mod commands;
mod files;

use std::process::ExitCode;

use clap::Parser;

use cli::{Cli, Command};
use files::OutDir;

/// Failure classes mapped onto the exit-code contract.
#[derive(Debug)]
pub enum Failure {
    /// Invalid arguments or configuration: exit 2.
    Usage(String),
    /// A scientific tolerance was missed: exit 1.
    Tolerance(String),
    /// The run aborted: exit 1.
    Runtime(String),
}

impl From<freebound::Error> for Failure {
    fn from(e: freebound::Error) -> Self {
        use freebound::Error as E;
        match e {
            E::InvalidParameter { .. }
            | E::Parse(_)
            | E::BadCoefficientCount(_)
            | E::BadNodeCount(_)
            | E::InfeasibleSet { .. } => Failure::Usage(e.to_string()),
            E::TooFewPoints { .. } => Failure::Tolerance(e.to_string()),
            _ => Failure::Runtime(e.to_string()),
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = OutDir::new(cli.out_dir.clone());
    let result = match &cli.command {
        Command::Oracle(a) => commands::oracle(a, &out),
        Command::Solve(a) => commands::solve(a, &out),
        Command::Gradcheck(a) => commands::gradcheck(a, &out),
        Command::Optimize(a) => commands::optimize(a, &out),
        Command::Rates(a) => commands::rates(a, &out),
        Command::Coercivity(a) => commands::coercivity(a, &out),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}\n\nFor more information, try '--help'.");
            ExitCode::from(2)
        }
        Err(Failure::Tolerance(msg)) => {
            eprintln!("tolerance failure: {msg}");
            ExitCode::from(1)
        }
        Err(Failure::Runtime(msg)) => {
            eprintln!("run failed: {msg}");
            ExitCode::from(1)
        }
    }
}
