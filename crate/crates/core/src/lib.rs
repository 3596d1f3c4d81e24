//! Highly cited publication groups and their stability under growing
//! citation windows.
//!
//! The crate is organised bottom-up:
//!
//! * [`corpus`] loads and validates publications, journals and citation
//!   events, and partitions publications into cells by the exact subject
//!   category combination of their journal.
//! * [`windows`] turns citation events into per-publication counts for a
//!   given window length.
//! * [`selection`] picks highly cited groups inside a cell, either by a
//!   pre-set percentile or by Characteristic Scores and Scales (CSS).
//! * [`stability`] sweeps window lengths and measures how much consecutive
//!   groups have in common.
//! * [`synth`] generates seeded cumulative-advantage corpora for testing.
//!
//! All means, thresholds and ratios are exact [`Rational`]s.

pub mod corpus;
pub mod error;
pub mod rational;
pub mod selection;
pub mod stability;
pub mod synth;
pub mod windows;

pub use corpus::{
    derive_partition_cells, load_corpus, CellKey, CitationEvent, Corpus, DocTypeFilter, Journal, LoadReport, Publication,
};
pub use error::{Error, LoadError, Result, Violation};
pub use rational::Rational;
pub use selection::{
    css_select, css_thresholds, percentile_select, select, CssLevel, CssThresholds,
    HighlyCitedGroup, SelectionLevel, TieMode,
};
pub use stability::{
    consecutive_overlap, convergence_summary, group_sequence, peak_year_report, size_series,
    ConvergenceSummary, OverlapCurve, OverlapMetric, OverlapPoint, PeakYearReport, SizeSeries,
};
pub use synth::{generate_corpus, preset, AgingKernel, CategoryLayout, PresetName, SynthConfig};
pub use windows::{cell_counts, citation_count, citation_series, CellCounts, CitationVector, WindowLength};
