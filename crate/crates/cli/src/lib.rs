//! Command-line front end for the photonic Bell-test library.

pub mod args;
pub mod commands;
pub mod error;
pub mod record;

use args::{Cli, Command};
use error::CliError;
use record::ResultRecord;

pub fn run(cli: &Cli) -> Result<ResultRecord, CliError> {
    let p = &cli.params;
    match cli.command {
        Command::Prob { setup } => commands::prob::run(setup, p),
        Command::Lhv { action } => commands::lhv::run(action, p),
        Command::Bell { inequality, mode } => commands::bell::run(inequality, mode, p),
    }
}
