//! `report`: overlap curves as an SVG line chart.

use std::fs;
use std::io::Write;
use std::path::PathBuf;

use citewin_core::{OverlapMetric, Rational};

use crate::chart::{LineChart, Series};
use crate::{CliError, CliResult};

#[derive(Debug, Clone, clap::Args)]
pub struct ReportArgs {
    /// overlap_curves.csv written by `analyze`.
    #[arg(long)]
    pub curves: PathBuf,
    /// jaccard, fwd or bwd.
    #[arg(long)]
    pub metric: String,
    #[arg(long)]
    pub svg: PathBuf,
}

fn exact_column(metric: OverlapMetric) -> &'static str {
    match metric {
        OverlapMetric::Jaccard => "jaccard_exact",
        OverlapMetric::OverlapFwd => "fwd_exact",
        OverlapMetric::OverlapBwd => "bwd_exact",
    }
}

/// One series per (cell, method, level), in order of first appearance.
pub fn read_curves(text: &str, metric: OverlapMetric) -> CliResult<Vec<Series>> {
    let mut reader = csv::Reader::from_reader(text.as_bytes());
    let headers = reader.headers().map_err(|e| CliError::Domain(format!("curves file: {e}")))?.clone();
    let column = |name: &str| {
        headers
            .iter()
            .position(|h| h == name)
            .ok_or_else(|| CliError::Domain(format!("curves file: missing column `{name}`")))
    };
    let (cell, level, window, value) = (column("cell")?, column("level")?, column("window_a")?, column(exact_column(metric))?);
    let mut series: Vec<Series> = Vec::new();
    for (i, record) in reader.records().enumerate() {
        let row = i + 2;
        let record = record.map_err(|e| CliError::Domain(format!("curves file: {e}")))?;
        let field = |idx: usize| record.get(idx).unwrap_or("");
        let x: u32 = field(window)
            .parse()
            .map_err(|_| CliError::Domain(format!("curves file row {row}: bad window_a `{}`", field(window))))?;
        let y: Rational = field(value)
            .parse()
            .map_err(|_| CliError::Domain(format!("curves file row {row}: bad ratio `{}`", field(value))))?;
        let label = format!("{} {}", field(cell), field(level));
        match series.iter_mut().find(|s| s.label == label) {
            Some(s) => s.points.push((f64::from(x), y.to_f64())),
            None => series.push(Series { label, points: vec![(f64::from(x), y.to_f64())] }),
        }
    }
    Ok(series)
}

pub fn run(args: &ReportArgs, out: &mut dyn Write) -> CliResult {
    let metric: OverlapMetric = args.metric.parse().map_err(CliError::Domain)?;
    let text = fs::read_to_string(&args.curves)
        .map_err(|e| CliError::Io(format!("reading {}: {e}", args.curves.display())))?;
    let series = read_curves(&text, metric)?;
    let chart = LineChart {
        title: format!("Consecutive-window overlap ({})", metric.name()),
        x_label: "citation window length (years)".into(),
        y_label: metric.name().into(),
        series,
    };
    fs::write(&args.svg, chart.to_svg())
        .map_err(|e| CliError::Io(format!("writing {}: {e}", args.svg.display())))?;
    writeln!(out, "wrote {} series to {}", chart.series.len(), args.svg.display())?;
    Ok(())
}
