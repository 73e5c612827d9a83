//! Command-line driver: shape files, single runs, sweeps and verification suites.

pub mod args;
pub mod error;
pub mod report;
pub mod run;
pub mod shape;
pub mod sweep;
pub mod verify;

use std::io::Write;

pub use args::{Cli, Command};
pub use error::{exit, CliError, Result};
pub use shape::Shape;

/// Dispatches a parsed command line and returns the process exit code.
pub fn execute(cli: &Cli, stdout: &mut dyn Write) -> Result<i32> {
    let out_dir = cli.out_dir.as_deref();
    match &cli.command {
        Command::Gen(a) => run::cmd_gen(a, out_dir, stdout).map(|_| exit::OK),
        Command::Run(a) => run::cmd_run(a, out_dir, stdout),
        Command::Sweep(a) => sweep::cmd_sweep(a, out_dir, stdout).map(|_| exit::OK),
        Command::Verify(a) => verify::cmd_verify(a, stdout).map(|_| exit::OK),
    }
}
