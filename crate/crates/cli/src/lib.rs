//! `citewin` command-line front end.
//!
//! Exit codes: 0 on success, 1 for domain and validation errors, 2 for I/O
//! errors.

pub mod analyze;
pub mod chart;
pub mod output;
pub mod report;
pub mod synth;
pub mod validate;

use std::io::Write;
use std::path::PathBuf;

use clap::{Parser, Subcommand};
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Domain(String),
    #[error("{0}")]
    Io(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            CliError::Io(_) => 2,
        }
    }
}

impl From<citewin_core::Error> for CliError {
    fn from(err: citewin_core::Error) -> Self {
        match err {
            citewin_core::Error::Io { .. } => CliError::Io(err.to_string()),
            other => CliError::Domain(other.to_string()),
        }
    }
}

impl From<std::io::Error> for CliError {
    fn from(err: std::io::Error) -> Self {
        CliError::Io(err.to_string())
    }
}

pub type CliResult<T = ()> = Result<T, CliError>;

#[derive(Debug, Parser)]
#[command(name = "citewin", version, about = "Highly cited publication groups across citation windows")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, clap::Args)]
pub struct DocTypeArgs {
    /// Keep only publications of this document type.
    #[arg(long, default_value = citewin_core::corpus::DEFAULT_DOC_TYPE, conflicts_with = "any_doc_type")]
    pub doc_type: String,
    /// Keep publications of every document type.
    #[arg(long)]
    pub any_doc_type: bool,
}

impl DocTypeArgs {
    pub fn filter(&self) -> citewin_core::DocTypeFilter {
        if self.any_doc_type {
            citewin_core::DocTypeFilter::Any
        } else {
            citewin_core::DocTypeFilter::Only(self.doc_type.clone())
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a corpus directory and print its cell inventory.
    Validate {
        corpus_dir: PathBuf,
        #[command(flatten)]
        doc_types: DocTypeArgs,
    },
    /// Select groups over a window range and write the report CSVs.
    Analyze(analyze::AnalyzeArgs),
    /// Generate a synthetic corpus from a JSON config.
    Synth(synth::SynthArgs),
    /// Draw overlap curves as an SVG line chart.
    Report(report::ReportArgs),
}

pub fn run(cli: Cli, out: &mut dyn Write) -> CliResult {
    match cli.command {
        Command::Validate { corpus_dir, doc_types } => validate::run(&corpus_dir, &doc_types.filter(), out),
        Command::Analyze(args) => analyze::run(&args, out),
        Command::Synth(args) => synth::run(&args, out),
        Command::Report(args) => report::run(&args, out),
    }
}
