use std::io::Write;
use std::path::Path;

use citewin_core::{Corpus, DocTypeFilter, Error};

use crate::{CliError, CliResult};

/// Loads the corpus and prints either its inventory or every violation.
pub fn run(dir: &Path, filter: &DocTypeFilter, out: &mut dyn Write) -> CliResult {
    let (corpus, report) = match Corpus::load_dir(dir, filter) {
        Ok(loaded) => loaded,
        Err(Error::Load(err)) => {
            let mut message = format!("{} violation(s) in {}", err.violations.len(), dir.display());
            for v in &err.violations {
                message.push_str(&format!("\n  {v}"));
            }
            return Err(CliError::Domain(message));
        }
        Err(other) => return Err(other.into()),
    };
    writeln!(
        out,
        "corpus ok: {} publications, {} journals, {} citation events",
        corpus.publications().len(),
        corpus.journals().len(),
        corpus.events().len()
    )?;
    match corpus.horizon_year() {
        Some(year) => writeln!(out, "horizon year: {year}")?,
        None => writeln!(out, "horizon year: none (empty corpus)")?,
    }
    if report.dropped_publications > 0 || report.dropped_events > 0 {
        writeln!(
            out,
            "warning: document-type filter dropped {} publications and {} citation events",
            report.dropped_publications, report.dropped_events
        )?;
    }
    writeln!(out, "cells: {}", corpus.cells().count())?;
    for (cell, size) in corpus.cell_sizes() {
        writeln!(out, "  {size:>8}  {cell}")?;
    }
    Ok(())
}
