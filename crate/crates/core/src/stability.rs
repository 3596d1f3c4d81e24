//! Stability of highly cited groups as the citation window grows.
//!
//! Groups are selected independently for each window length, and each
//! pair of consecutive lengths is compared. Three overlap ratios are kept
//! because no single denominator is canonical:
//!
//! * `jaccard`: `|A ∩ B| / |A ∪ B|`
//! * `overlap_fwd`: `|A ∩ B| / |A|`, the share of the earlier group retained
//! * `overlap_bwd`: `|A ∩ B| / |B|`, the share of the later group already present
//!
//! When both groups are empty all three are 1; when exactly one is empty
//! all three are 0.

use std::collections::BTreeSet;
use std::fmt;
use std::ops::RangeInclusive;
use std::str::FromStr;
use std::thread;

use crate::corpus::{CellKey, Corpus};
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::selection::{select, HighlyCitedGroup, SelectionLevel, TieMode};
use crate::windows::{cell_counts, WindowLength};

/// Default convergence threshold in basis points (80%).
pub const DEFAULT_THRESHOLD_BP: u32 = 8000;

/// Selects one group per window length in `lengths`.
pub fn group_sequence(
    corpus: &Corpus,
    cell: &CellKey,
    level: SelectionLevel,
    lengths: RangeInclusive<WindowLength>,
    tie_mode: TieMode,
) -> Result<Vec<HighlyCitedGroup>> {
    let (first, last) = (lengths.start().get(), lengths.end().get());
    if first > last {
        return Err(Error::NonConsecutiveGroups(format!("empty window range {first}..{last}")));
    }
    (first..=last)
        .map(|length| {
            let counts = cell_counts(corpus, cell, WindowLength::new(length)?)?;
            select(&counts, level, tie_mode)
        })
        .collect()
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum OverlapMetric {
    Jaccard,
    #[default]
    OverlapFwd,
    OverlapBwd,
}

impl OverlapMetric {
    pub const ALL: [OverlapMetric; 3] = [OverlapMetric::Jaccard, OverlapMetric::OverlapFwd, OverlapMetric::OverlapBwd];

    pub fn name(self) -> &'static str {
        match self {
            OverlapMetric::Jaccard => "jaccard",
            OverlapMetric::OverlapFwd => "overlap_fwd",
            OverlapMetric::OverlapBwd => "overlap_bwd",
        }
    }
}

impl fmt::Display for OverlapMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OverlapMetric {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "jaccard" => Ok(OverlapMetric::Jaccard),
            "fwd" | "overlap_fwd" => Ok(OverlapMetric::OverlapFwd),
            "bwd" | "overlap_bwd" => Ok(OverlapMetric::OverlapBwd),
            other => Err(format!("unknown metric `{other}`: expected jaccard, fwd or bwd")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlapPoint {
    pub window_a: WindowLength,
    pub window_b: WindowLength,
    pub size_a: usize,
    pub size_b: usize,
    pub intersection: usize,
    pub jaccard: Rational,
    pub overlap_fwd: Rational,
    pub overlap_bwd: Rational,
}

impl OverlapPoint {
    pub fn between(
        window_a: WindowLength,
        a: &BTreeSet<String>,
        window_b: WindowLength,
        b: &BTreeSet<String>,
    ) -> Self {
        let intersection = a.intersection(b).count();
        let (size_a, size_b) = (a.len(), b.len());
        let ratio = |den: usize| match (size_a, size_b) {
            (0, 0) => Rational::ONE,
            (0, _) | (_, 0) => Rational::ZERO,
            _ => Rational::new(intersection as u64, den as u64),
        };
        OverlapPoint {
            window_a,
            window_b,
            size_a,
            size_b,
            intersection,
            jaccard: ratio(size_a + size_b - intersection),
            overlap_fwd: ratio(size_a),
            overlap_bwd: ratio(size_b),
        }
    }

    pub fn metric(&self, metric: OverlapMetric) -> Rational {
        match metric {
            OverlapMetric::Jaccard => self.jaccard,
            OverlapMetric::OverlapFwd => self.overlap_fwd,
            OverlapMetric::OverlapBwd => self.overlap_bwd,
        }
    }

    /// True when the ratios come from an empty-group convention.
    pub fn has_empty_group(&self) -> bool {
        self.size_a == 0 || self.size_b == 0
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OverlapCurve {
    pub cell: CellKey,
    pub level: SelectionLevel,
    pub points: Vec<OverlapPoint>,
}

/// Compares each group with the next one.
///
/// The groups must share cell and level and have consecutive window lengths.
pub fn consecutive_overlap(groups: &[HighlyCitedGroup]) -> Result<OverlapCurve> {
    if groups.len() < 2 {
        return Err(Error::TooFewGroups(groups.len()));
    }
    let first = &groups[0];
    let mut points = Vec::with_capacity(groups.len() - 1);
    for pair in groups.windows(2) {
        let (a, b) = (&pair[0], &pair[1]);
        if b.cell != first.cell || b.level != first.level {
            return Err(Error::NonConsecutiveGroups(format!(
                "mixed groups ({} {}) and ({} {})",
                first.cell, first.level, b.cell, b.level
            )));
        }
        if b.window.get() != a.window.get() + 1 {
            return Err(Error::NonConsecutiveGroups(format!(
                "window {} followed by {}",
                a.window, b.window
            )));
        }
        points.push(OverlapPoint::between(a.window, &a.members, b.window, &b.members));
    }
    Ok(OverlapCurve {
        cell: first.cell.clone(),
        level: first.level,
        points,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConvergenceSummary {
    /// Earliest `window_a` from which the metric stays at or above the
    /// threshold for the rest of the curve.
    pub first_window_at_threshold: Option<WindowLength>,
    pub threshold: Rational,
    pub metric: OverlapMetric,
}

/// Finds the start of the final run of points at or above `threshold`.
pub fn convergence_summary(curve: &OverlapCurve, metric: OverlapMetric, threshold: Rational) -> Result<ConvergenceSummary> {
    if threshold.is_zero() || threshold > Rational::ONE {
        return Err(Error::InvalidThreshold(threshold.to_string()));
    }
    let mut first = None;
    for point in curve.points.iter().rev() {
        if point.metric(metric) >= threshold {
            first = Some(point.window_a);
        } else {
            break;
        }
    }
    Ok(ConvergenceSummary {
        first_window_at_threshold: first,
        threshold,
        metric,
    })
}

/// Mean citations per year offset for a set of publications.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PeakYearReport {
    pub size: usize,
    pub mean_by_offset: Vec<Rational>,
    /// Offset with the largest mean; the earliest one on ties.
    pub peak_offset: usize,
}

/// Index of the largest value, earliest on ties.
pub fn peak_offset(means: &[Rational]) -> Option<usize> {
    let mut best: Option<(usize, Rational)> = None;
    for (i, &m) in means.iter().enumerate() {
        if best.is_none_or(|(_, b)| m > b) {
            best = Some((i, m));
        }
    }
    best.map(|(i, _)| i)
}

/// Mean series and peak offset of one set.
pub fn peak_profile(corpus: &Corpus, set: &BTreeSet<String>) -> Result<PeakYearReport> {
    if set.is_empty() {
        return Err(Error::EmptySet);
    }
    // Offsets beyond a publication's horizon contribute nothing and do not
    // count towards that offset's denominator.
    let mut sums: Vec<u64> = Vec::new();
    let mut contributors: Vec<u64> = Vec::new();
    for id in set {
        let series = corpus.series_at(corpus.index_of(id)?);
        if series.len() > sums.len() {
            sums.resize(series.len(), 0);
            contributors.resize(series.len(), 0);
        }
        for (d, &c) in series.iter().enumerate() {
            sums[d] += c;
            contributors[d] += 1;
        }
    }
    let mean_by_offset: Vec<Rational> = sums
        .iter()
        .zip(&contributors)
        .map(|(&s, &n)| Rational::new(s, n))
        .collect();
    Ok(PeakYearReport {
        size: set.len(),
        peak_offset: peak_offset(&mean_by_offset).unwrap_or(0),
        mean_by_offset,
    })
}

/// Peak-year profiles of a group and of its companion set (usually the
/// rest of the reference set).
pub fn peak_year_report(
    corpus: &Corpus,
    group_members: &BTreeSet<String>,
    companion_set: &BTreeSet<String>,
) -> Result<(PeakYearReport, PeakYearReport)> {
    Ok((peak_profile(corpus, group_members)?, peak_profile(corpus, companion_set)?))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizePoint {
    pub window: WindowLength,
    pub size: usize,
    pub reference_set_size: usize,
    pub share: Rational,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SizeSeries {
    pub points: Vec<SizePoint>,
}

pub fn size_series(groups: &[HighlyCitedGroup]) -> SizeSeries {
    SizeSeries {
        points: groups
            .iter()
            .map(|g| SizePoint {
                window: g.window,
                size: g.len(),
                reference_set_size: g.reference_set_size,
                share: g.share(),
            })
            .collect(),
    }
}

/// Everything computed for one (cell, level) pair.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellLevelAnalysis {
    pub cell: CellKey,
    pub level: SelectionLevel,
    pub groups: Vec<HighlyCitedGroup>,
    /// Absent when the window range holds a single length.
    pub curve: Option<OverlapCurve>,
    pub sizes: SizeSeries,
}

/// Runs [`group_sequence`], [`consecutive_overlap`] and [`size_series`] for
/// every cell × level pair. Pairs are evaluated on scoped worker threads;
/// results come back ordered by cell, then level as given.
pub fn sweep(
    corpus: &Corpus,
    cells: &[CellKey],
    levels: &[SelectionLevel],
    lengths: RangeInclusive<WindowLength>,
    tie_mode: TieMode,
) -> Result<Vec<CellLevelAnalysis>> {
    let tasks: Vec<(&CellKey, SelectionLevel)> = cells
        .iter()
        .flat_map(|c| levels.iter().map(move |&l| (c, l)))
        .collect();
    let run = |(cell, level): (&CellKey, SelectionLevel)| -> Result<CellLevelAnalysis> {
        let groups = group_sequence(corpus, cell, level, lengths.clone(), tie_mode)?;
        let curve = if groups.len() >= 2 { Some(consecutive_overlap(&groups)?) } else { None };
        let sizes = size_series(&groups);
        Ok(CellLevelAnalysis { cell: cell.clone(), level, groups, curve, sizes })
    };
    let workers = thread::available_parallelism().map_or(1, |n| n.get()).min(tasks.len().max(1));
    if workers <= 1 {
        return tasks.into_iter().map(run).collect();
    }
    let chunk = tasks.len().div_ceil(workers);
    let results: Vec<Vec<Result<CellLevelAnalysis>>> = thread::scope(|scope| {
        let handles: Vec<_> = tasks
            .chunks(chunk)
            .map(|part| scope.spawn(|| part.iter().copied().map(run).collect::<Vec<_>>()))
            .collect();
        handles.into_iter().map(|h| h.join().expect("sweep worker panicked")).collect()
    });
    results.into_iter().flatten().collect()
}
