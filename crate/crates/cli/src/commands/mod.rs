//! Subcommand implementations and the exit-code policy.
//!
//! Errors fall into two classes: `Usage` covers bad flags and malformed or
//! invalid configuration (exit code 1); `Runtime` covers everything that
//! goes wrong while doing the work — unreadable inputs, malformed data
//! files, incompatible checkpoints, I/O failures (exit code 2).

use std::fmt;
use std::fs;
use std::path::Path;

use serde::de::DeserializeOwned;

use crate::args::{Cli, Command};

mod eval;
mod reward_profile;
mod simulate;
mod train;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ErrorKind {
    Usage,
    Runtime,
}

#[derive(Debug)]
pub struct CommandError {
    kind: ErrorKind,
    source: anyhow::Error,
}

impl CommandError {
    pub fn usage(source: impl Into<anyhow::Error>) -> Self {
        Self { kind: ErrorKind::Usage, source: source.into() }
    }

    pub fn runtime(source: impl Into<anyhow::Error>) -> Self {
        Self { kind: ErrorKind::Runtime, source: source.into() }
    }

    pub fn exit_code(&self) -> u8 {
        match self.kind {
            ErrorKind::Usage => 1,
            ErrorKind::Runtime => 2,
        }
    }
}

impl fmt::Display for CommandError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        // `{:#}` on the inner error prints the whole context chain.
        write!(f, "{:#}", self.source)
    }
}

impl std::error::Error for CommandError {}

pub fn run(cli: &Cli) -> Result<(), CommandError> {
    match &cli.command {
        Command::Simulate(args) => simulate::run(args),
        Command::RewardProfile(args) => reward_profile::run(args),
        Command::Train(args) => train::run(args),
        Command::Eval(args) => eval::run(args),
    }
}

/// Wraps an error with context as a runtime (exit 2) failure; shorthand for
/// the `map_err` at almost every I/O step.
fn runtime_err<E: fmt::Display>(context: impl fmt::Display) -> impl FnOnce(E) -> CommandError {
    move |e| CommandError::runtime(anyhow::anyhow!("{context}: {e}"))
}

/// Loads a JSON config file. Parse and read failures are usage errors: the
/// file is part of how the user configured the run.
fn read_config<T: DeserializeOwned>(path: &Path) -> Result<T, CommandError> {
    let text = fs::read_to_string(path).map_err(|e| {
        CommandError::usage(anyhow::anyhow!("cannot read config {}: {e}", path.display()))
    })?;
    serde_json::from_str(&text).map_err(|e| {
        CommandError::usage(anyhow::anyhow!("config {} is invalid: {e}", path.display()))
    })
}

/// Loads a JSONL corpus; problems here are data errors.
fn read_corpus(path: &Path) -> Result<Vec<seqqa_core::Episode>, CommandError> {
    seqqa_core::sim::read_corpus(path).map_err(|e| {
        CommandError::runtime(anyhow::anyhow!("corpus {}: {e}", path.display()))
    })
}
