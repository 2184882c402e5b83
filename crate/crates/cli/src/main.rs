//! `seqqa`: command-line driver for the dual-agent sequence quality
//! assessment pipeline.
//!
//! Subcommands cover the full experiment loop:
//! - `simulate` generates a seeded synthetic corpus (train/test JSONL),
//! - `reward-profile` renders the shaped reward envelope for a label track
//!   as CSV and SVG,
//! - `train` runs selection pretraining followed by joint training and
//!   writes checkpoints plus per-epoch logs,
//! - `eval` scores a checkpoint against a corpus at both the frame and the
//!   sequence level.
//!
//! Every command writes a `manifest.json` next to its outputs recording the
//! exact invocation, resolved configuration, seeds, and SHA-256 hashes of
//! all inputs and outputs; re-running the recorded invocation reproduces
//! the outputs byte for byte. Outputs are staged in a temporary directory
//! and renamed into place, so a failed run leaves nothing behind.
//!
//! Exit codes: 0 on success, 1 for usage or configuration errors, 2 for
//! runtime or data errors.

mod args;
mod chart;
mod commands;
mod manifest;
mod stage;

use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    let cli = match args::Cli::try_parse() {
        Ok(cli) => cli,
        Err(err) => {
            // clap reports --help and --version through Err as well; those
            // print to stdout and exit 0, while genuine parse failures go
            // to stderr with the usage exit code.
            let is_usage_failure = err.use_stderr();
            let _ = err.print();
            return if is_usage_failure { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match commands::run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(err) => {
            eprintln!("error: {err:#}");
            ExitCode::from(err.exit_code())
        }
    }
}
