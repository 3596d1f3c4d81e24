//! `analyze`: group selection over a window range and the five report CSVs.

use std::collections::BTreeSet;
use std::io::Write;
use std::path::PathBuf;

use citewin_core::stability::{peak_profile, sweep, CellLevelAnalysis, DEFAULT_THRESHOLD_BP};
use citewin_core::{
    convergence_summary, CellKey, Corpus, OverlapMetric, Rational, SelectionLevel, TieMode,
    WindowLength,
};

use crate::output::write_all_atomic;
use crate::{CliError, CliResult, DocTypeArgs};

pub const GROUPS_FILE: &str = "groups.csv";
pub const OVERLAP_FILE: &str = "overlap_curves.csv";
pub const SIZES_FILE: &str = "size_series.csv";
pub const PEAKS_FILE: &str = "peak_years.csv";
pub const CONVERGENCE_FILE: &str = "convergence.csv";

pub const OVERLAP_HEADER: [&str; 14] = [
    "cell",
    "method",
    "level",
    "window_a",
    "window_b",
    "size_a",
    "size_b",
    "intersection",
    "jaccard",
    "overlap_fwd",
    "overlap_bwd",
    "jaccard_exact",
    "fwd_exact",
    "bwd_exact",
];

/// Decimal places for ratios in reports.
const PLACES: u32 = 6;

#[derive(Debug, Clone, clap::Args)]
pub struct AnalyzeArgs {
    /// Directory holding publications.csv, journals.csv and citations.csv.
    #[arg(long)]
    pub corpus: PathBuf,
    /// Comma-separated levels: pN (basis points), css-remarkably, css-outstandingly.
    #[arg(long, value_delimiter = ',', default_value = "p500,p100,css-remarkably,css-outstandingly")]
    pub levels: Vec<SelectionLevel>,
    /// Window lengths as A..B (inclusive), counting the publication year as 1.
    #[arg(long, value_parser = parse_window_range)]
    pub windows: (u32, u32),
    /// Comma-separated cell keys (categories joined by `|`); all non-empty cells by default.
    #[arg(long, value_delimiter = ',')]
    pub cells: Option<Vec<String>>,
    #[arg(long, default_value = "inclusive")]
    pub tie_mode: TieMode,
    /// Metric for the printed summary: jaccard, fwd or bwd.
    #[arg(long, default_value = "fwd")]
    pub metric: OverlapMetric,
    /// Convergence threshold in basis points.
    #[arg(long, default_value_t = DEFAULT_THRESHOLD_BP)]
    pub threshold_bp: u32,
    #[arg(long)]
    pub out: PathBuf,
    #[command(flatten)]
    pub doc_types: DocTypeArgs,
}

pub fn parse_window_range(s: &str) -> Result<(u32, u32), String> {
    let err = || format!("invalid window range `{s}`: expected A..B with 1 <= A <= B");
    let (a, b) = s.split_once("..").ok_or_else(err)?;
    let a: u32 = a.trim().parse().map_err(|_| err())?;
    let b: u32 = b.trim().parse().map_err(|_| err())?;
    if a == 0 || a > b {
        return Err(err());
    }
    Ok((a, b))
}

/// Largest window length every member of `cell` supports.
fn cell_max_window(corpus: &Corpus, cell: &CellKey) -> CliResult<u32> {
    let mut max = u32::MAX;
    for id in corpus.cell_members(cell)? {
        max = max.min(corpus.max_window(id)?);
    }
    Ok(max)
}

fn resolve_cells(corpus: &Corpus, requested: Option<&[String]>) -> CliResult<Vec<CellKey>> {
    match requested {
        None => Ok(corpus
            .cell_sizes()
            .filter(|(_, size)| *size > 0)
            .map(|(cell, _)| cell.clone())
            .collect()),
        Some(keys) => {
            let mut cells = Vec::new();
            for key in keys {
                let cell = CellKey::parse(key);
                let size = corpus.cell_members(&cell)?.len();
                if size == 0 {
                    return Err(CliError::Domain(format!("cell `{cell}` has no publications")));
                }
                if !cells.contains(&cell) {
                    cells.push(cell);
                }
            }
            Ok(cells)
        }
    }
}

pub fn run(args: &AnalyzeArgs, out: &mut dyn Write) -> CliResult {
    let (corpus, load_report) = Corpus::load_dir(&args.corpus, &args.doc_types.filter())?;
    if load_report.dropped_publications > 0 {
        eprintln!(
            "warning: document-type filter dropped {} publications and {} citation events",
            load_report.dropped_publications, load_report.dropped_events
        );
    }
    if !(1..=10_000).contains(&args.threshold_bp) {
        return Err(CliError::Domain(format!("--threshold-bp must lie in 1..=10000, got {}", args.threshold_bp)));
    }
    if args.levels.is_empty() {
        return Err(CliError::Domain("no levels given".into()));
    }
    let cells = resolve_cells(&corpus, args.cells.as_deref())?;
    if cells.is_empty() {
        return Err(CliError::Domain("corpus has no non-empty cells".into()));
    }
    let (first, last) = args.windows;
    for cell in &cells {
        let max = cell_max_window(&corpus, cell)?;
        if last > max {
            return Err(CliError::Domain(format!(
                "window range {first}..{last} exceeds the corpus horizon (horizon year {}): cell `{cell}` supports lengths up to {max}",
                corpus.horizon_year().map_or("none".to_string(), |y| y.to_string()),
            )));
        }
    }
    let lengths = WindowLength::new(first)?..=WindowLength::new(last)?;
    let analyses = sweep(&corpus, &cells, &args.levels, lengths, args.tie_mode)?;
    let threshold = Rational::new(args.threshold_bp as u64, 10_000);
    let reports = Reports::build(&corpus, &analyses, threshold, args.threshold_bp)?;

    write_all_atomic(
        &args.out,
        &[
            (GROUPS_FILE, reports.groups),
            (OVERLAP_FILE, reports.overlap),
            (SIZES_FILE, reports.sizes),
            (PEAKS_FILE, reports.peaks),
            (CONVERGENCE_FILE, reports.convergence),
        ],
    )?;

    writeln!(
        out,
        "analyzed {} cell(s) x {} level(s), windows {first}..{last}; reports in {}",
        cells.len(),
        args.levels.len(),
        args.out.display()
    )?;
    for a in &analyses {
        let first_window = match &a.curve {
            Some(curve) => convergence_summary(curve, args.metric, threshold)?
                .first_window_at_threshold
                .map_or("never".to_string(), |w| w.to_string()),
            None => "n/a".to_string(),
        };
        writeln!(
            out,
            "  {} {}: {} >= {} from window {first_window}",
            a.cell,
            a.level,
            args.metric,
            threshold.to_decimal(2)
        )?;
    }
    Ok(())
}

/// The five report files, rendered in memory.
pub struct Reports {
    pub groups: Vec<u8>,
    pub overlap: Vec<u8>,
    pub sizes: Vec<u8>,
    pub peaks: Vec<u8>,
    pub convergence: Vec<u8>,
}

fn writer() -> csv::Writer<Vec<u8>> {
    csv::Writer::from_writer(Vec::new())
}

fn finish(w: csv::Writer<Vec<u8>>) -> CliResult<Vec<u8>> {
    w.into_inner().map_err(|e| CliError::Io(e.to_string()))
}

fn csv_err(e: csv::Error) -> CliError {
    CliError::Io(e.to_string())
}

impl Reports {
    pub fn build(
        corpus: &Corpus,
        analyses: &[CellLevelAnalysis],
        threshold: Rational,
        threshold_bp: u32,
    ) -> CliResult<Reports> {
        let mut groups = writer();
        groups
            .write_record(["cell", "method", "level", "window", "threshold_exact", "reference_size", "member_id"])
            .map_err(csv_err)?;
        let mut overlap = writer();
        overlap.write_record(OVERLAP_HEADER).map_err(csv_err)?;
        let mut sizes = writer();
        sizes
            .write_record(["cell", "method", "level", "window", "size", "reference_size", "share", "share_exact"])
            .map_err(csv_err)?;
        let mut peaks = writer();
        peaks
            .write_record(["cell", "method", "level", "window", "group", "peak_offset"])
            .map_err(csv_err)?;
        let mut convergence = writer();
        convergence
            .write_record(["cell", "method", "level", "metric", "threshold_bp", "first_window"])
            .map_err(csv_err)?;

        for a in analyses {
            let cell = a.cell.as_str();
            let method = a.level.method();
            let level = a.level.to_string();
            let members = corpus.cell_members(&a.cell)?;
            for g in &a.groups {
                let window = g.window.to_string();
                let threshold = g.effective_threshold.to_exact_string();
                let reference = g.reference_set_size.to_string();
                if g.members.is_empty() {
                    groups
                        .write_record([cell, method, &level, &window, &threshold, &reference, ""])
                        .map_err(csv_err)?;
                }
                for id in &g.members {
                    groups
                        .write_record([cell, method, &level, &window, &threshold, &reference, id])
                        .map_err(csv_err)?;
                }

                let remainder: BTreeSet<String> = members.difference(&g.members).cloned().collect();
                let peak = |set: &BTreeSet<String>| -> CliResult<String> {
                    if set.is_empty() {
                        return Ok(String::new());
                    }
                    Ok(peak_profile(corpus, set)?.peak_offset.to_string())
                };
                let hi = peak(&g.members)?;
                let rest = peak(&remainder)?;
                peaks
                    .write_record([cell, method, &level, &window, "highly_cited", &hi])
                    .map_err(csv_err)?;
                peaks
                    .write_record([cell, method, &level, &window, "remainder", &rest])
                    .map_err(csv_err)?;
            }
            for p in &a.sizes.points {
                sizes
                    .write_record([
                        cell,
                        method,
                        &level,
                        &p.window.to_string(),
                        &p.size.to_string(),
                        &p.reference_set_size.to_string(),
                        &p.share.to_decimal(PLACES),
                        &p.share.to_exact_string(),
                    ])
                    .map_err(csv_err)?;
            }
            if let Some(curve) = &a.curve {
                for p in &curve.points {
                    overlap
                        .write_record([
                            cell,
                            method,
                            &level,
                            &p.window_a.to_string(),
                            &p.window_b.to_string(),
                            &p.size_a.to_string(),
                            &p.size_b.to_string(),
                            &p.intersection.to_string(),
                            &p.jaccard.to_decimal(PLACES),
                            &p.overlap_fwd.to_decimal(PLACES),
                            &p.overlap_bwd.to_decimal(PLACES),
                            &p.jaccard.to_exact_string(),
                            &p.overlap_fwd.to_exact_string(),
                            &p.overlap_bwd.to_exact_string(),
                        ])
                        .map_err(csv_err)?;
                }
            }
            for metric in OverlapMetric::ALL {
                let first = match &a.curve {
                    Some(curve) => convergence_summary(curve, metric, threshold)?
                        .first_window_at_threshold
                        .map_or(String::new(), |w| w.to_string()),
                    None => String::new(),
                };
                convergence
                    .write_record([cell, method, &level, metric.name(), &threshold_bp.to_string(), &first])
                    .map_err(csv_err)?;
            }
        }

        Ok(Reports {
            groups: finish(groups)?,
            overlap: finish(overlap)?,
            sizes: finish(sizes)?,
            peaks: finish(peaks)?,
            convergence: finish(convergence)?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn window_range_syntax() {
        assert_eq!(parse_window_range("1..8"), Ok((1, 8)));
        assert_eq!(parse_window_range("3..3"), Ok((3, 3)));
        assert!(parse_window_range("0..3").is_err());
        assert!(parse_window_range("4..3").is_err());
        assert!(parse_window_range("1-3").is_err());
    }
}
