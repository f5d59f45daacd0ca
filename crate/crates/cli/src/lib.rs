//! Command-line front end for the simulation and verification experiments.

#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod experiments;
pub mod report;

use std::path::PathBuf;

use clap::Parser;

pub use experiments::Command;
pub use report::{Format, Outcome, Row};

#[derive(Debug, Clone, Parser)]
#[command(name = "supsim", version, about = "Stable-regenerative sup-measure simulator")]
pub struct Cli {
    #[arg(long, global = true, default_value_t = 42)]
    pub seed: u64,
    /// worker threads (default: all cores)
    #[arg(long, global = true, env = "SUPSIM_THREADS")]
    pub threads: Option<usize>,
    /// output directory (default: out/<subcommand>)
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    #[command(subcommand)]
    pub command: Command,
}

impl Cli {
    pub fn out_dir(&self) -> PathBuf {
        self.out.clone().unwrap_or_else(|| PathBuf::from("out").join(self.command.name()))
    }
}
