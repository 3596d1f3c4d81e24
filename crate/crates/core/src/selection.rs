//! Highly cited groups inside a reference set.
//!
//! Two methods are supported:
//!
//! * **Pre-set percentiles.** The top `p` of the reference set, with `p`
//!   carried in basis points (500 = 5%, 100 = 1%).
//! * **Characteristic Scores and Scales.** The distribution is truncated
//!   repeatedly at its conditional mean: `β₁` is the mean of all counts and
//!   `βⱼ` is the mean of the counts `c ≥ βⱼ₋₁`. Counts at or above `β₂` are
//!   at least remarkably cited, counts at or above `β₃` are outstandingly
//!   cited.
//!
//! Every mean and every comparison is exact.

use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use crate::corpus::CellKey;
use crate::error::{Error, Result};
use crate::rational::Rational;
use crate::windows::{CellCounts, WindowLength};

/// Number of CSS thresholds computed (four classes).
pub const CSS_DEPTH: usize = 3;

/// Percentile levels used when none are given: 5% and 1%.
pub const DEFAULT_PERCENTILES_BP: [u32; 2] = [500, 100];

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum CssLevel {
    /// `c ≥ β₂`
    AtLeastRemarkably,
    /// `c ≥ β₃`
    Outstandingly,
}

impl CssLevel {
    /// 1-based index of the governing threshold.
    pub fn beta_index(self) -> usize {
        match self {
            CssLevel::AtLeastRemarkably => 2,
            CssLevel::Outstandingly => 3,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            CssLevel::AtLeastRemarkably => "at_least_remarkably",
            CssLevel::Outstandingly => "outstandingly",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum SelectionLevel {
    Percentile { basis_points: u32 },
    Css(CssLevel),
}

impl SelectionLevel {
    pub fn percentile(basis_points: u32) -> Result<Self> {
        check_basis_points(basis_points)?;
        Ok(SelectionLevel::Percentile { basis_points })
    }

    /// `p500`, `p100`, `css-remarkably`, `css-outstandingly`.
    pub fn defaults() -> Vec<SelectionLevel> {
        let mut levels: Vec<SelectionLevel> = DEFAULT_PERCENTILES_BP
            .iter()
            .map(|&basis_points| SelectionLevel::Percentile { basis_points })
            .collect();
        levels.push(SelectionLevel::Css(CssLevel::AtLeastRemarkably));
        levels.push(SelectionLevel::Css(CssLevel::Outstandingly));
        levels
    }

    pub fn method(&self) -> &'static str {
        match self {
            SelectionLevel::Percentile { .. } => "percentile",
            SelectionLevel::Css(_) => "css",
        }
    }
}

/// Formats as the command-line token, e.g. `p500` or `css-outstandingly`.
impl fmt::Display for SelectionLevel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SelectionLevel::Percentile { basis_points } => write!(f, "p{basis_points}"),
            SelectionLevel::Css(CssLevel::AtLeastRemarkably) => f.write_str("css-remarkably"),
            SelectionLevel::Css(CssLevel::Outstandingly) => f.write_str("css-outstandingly"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("unknown level `{0}`: expected pN (basis points 1..=10000), css-remarkably or css-outstandingly")]
pub struct ParseLevelError(String);

impl FromStr for SelectionLevel {
    type Err = ParseLevelError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseLevelError(s.to_string());
        match s.trim() {
            "css-remarkably" => Ok(SelectionLevel::Css(CssLevel::AtLeastRemarkably)),
            "css-outstandingly" => Ok(SelectionLevel::Css(CssLevel::Outstandingly)),
            other => {
                let bp: u32 = other
                    .strip_prefix('p')
                    .and_then(|n| n.parse().ok())
                    .ok_or_else(err)?;
                SelectionLevel::percentile(bp).map_err(|_| err())
            }
        }
    }
}

/// How ties at the percentile boundary are treated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum TieMode {
    /// Everything at or above the boundary count; may exceed the target size.
    #[default]
    Inclusive,
    /// Exactly the target size; boundary ties broken by id ascending.
    ExactSize,
}

impl fmt::Display for TieMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            TieMode::Inclusive => "inclusive",
            TieMode::ExactSize => "exact-size",
        })
    }
}

impl FromStr for TieMode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "inclusive" => Ok(TieMode::Inclusive),
            "exact-size" | "exact_size" => Ok(TieMode::ExactSize),
            other => Err(format!("unknown tie mode `{other}`: expected inclusive or exact-size")),
        }
    }
}

/// CSS thresholds `β₁..β₃`.
///
/// When a conditional mean equals its predecessor every remaining count
/// equals that mean and the iteration stops: `stalled_at` holds the
/// 1-based index of the threshold that could not be formed, and `betas`
/// only holds the prefix before it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CssThresholds {
    pub betas: Vec<Rational>,
    pub stalled_at: Option<usize>,
}

impl CssThresholds {
    /// `βⱼ` for a 1-based `j`, if it was formed.
    pub fn beta(&self, j: usize) -> Option<Rational> {
        j.checked_sub(1).and_then(|i| self.betas.get(i)).copied()
    }
}

pub fn css_thresholds(counts: &[u64]) -> Result<CssThresholds> {
    if counts.is_empty() {
        return Err(Error::EmptyCounts);
    }
    let mut betas = Vec::with_capacity(CSS_DEPTH);
    let mut floor = Rational::ZERO;
    let mut stalled_at = None;
    for j in 1..=CSS_DEPTH {
        let (sum, n) = counts
            .iter()
            .filter(|&&c| floor.le_count(c))
            .fold((0u64, 0u64), |(s, n), &c| (s + c, n + 1));
        // The maximum count is never below the mean, so n > 0.
        let beta = Rational::new(sum, n);
        if j > 1 && beta == floor {
            stalled_at = Some(j);
            break;
        }
        betas.push(beta);
        floor = beta;
    }
    Ok(CssThresholds { betas, stalled_at })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct HighlyCitedGroup {
    pub cell: CellKey,
    pub level: SelectionLevel,
    pub window: WindowLength,
    pub members: BTreeSet<String>,
    pub effective_threshold: Rational,
    pub reference_set_size: usize,
}

impl HighlyCitedGroup {
    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Group size as a share of the reference set.
    pub fn share(&self) -> Rational {
        Rational::new(self.members.len() as u64, self.reference_set_size as u64)
    }
}

fn group(counts: &CellCounts, level: SelectionLevel, members: BTreeSet<String>, threshold: Rational) -> HighlyCitedGroup {
    HighlyCitedGroup {
        cell: counts.cell.clone(),
        level,
        window: counts.window,
        members,
        effective_threshold: threshold,
        reference_set_size: counts.len(),
    }
}

/// Selects the counts at or above `β₂` or `β₃`.
///
/// If the iteration stalled before the governing threshold the group is
/// empty and the threshold reported is the last one formed.
pub fn css_select(counts: &CellCounts, level: CssLevel) -> Result<HighlyCitedGroup> {
    if counts.is_empty() {
        return Err(Error::EmptyReferenceSet);
    }
    let values: Vec<u64> = counts.counts().collect();
    let thresholds = css_thresholds(&values)?;
    let (members, threshold) = match thresholds.beta(level.beta_index()) {
        Some(beta) => {
            let members = counts
                .entries()
                .iter()
                .filter(|(_, c)| beta.le_count(*c))
                .map(|(id, _)| id.clone())
                .collect();
            (members, beta)
        }
        None => {
            let last = *thresholds.betas.last().expect("β₁ always exists");
            (BTreeSet::new(), last)
        }
    };
    Ok(group(counts, SelectionLevel::Css(level), members, threshold))
}

fn check_basis_points(basis_points: u32) -> Result<()> {
    if (1..=10_000).contains(&basis_points) {
        Ok(())
    } else {
        Err(Error::BasisPoints(basis_points))
    }
}

/// Target group size `⌈basis_points · n / 10000⌉`.
pub fn percentile_rank(basis_points: u32, n: usize) -> usize {
    (basis_points as usize * n).div_ceil(10_000)
}

/// Selects the top `basis_points / 10000` of the reference set.
///
/// The boundary count `t` is the count of the `k`-th entry in the
/// deterministic ordering, `k = ⌈p·N⌉`.
pub fn percentile_select(counts: &CellCounts, basis_points: u32, tie_mode: TieMode) -> Result<HighlyCitedGroup> {
    check_basis_points(basis_points)?;
    if counts.is_empty() {
        return Err(Error::EmptyReferenceSet);
    }
    let k = percentile_rank(basis_points, counts.len());
    let entries = counts.entries();
    let boundary = entries[k - 1].1;
    let members = match tie_mode {
        TieMode::Inclusive => entries
            .iter()
            .take_while(|(_, c)| *c >= boundary)
            .map(|(id, _)| id.clone())
            .collect(),
        TieMode::ExactSize => entries[..k].iter().map(|(id, _)| id.clone()).collect(),
    };
    Ok(group(
        counts,
        SelectionLevel::Percentile { basis_points },
        members,
        Rational::from(boundary),
    ))
}

/// Dispatches to the selector for `level`. `tie_mode` only affects
/// percentile levels.
pub fn select(counts: &CellCounts, level: SelectionLevel, tie_mode: TieMode) -> Result<HighlyCitedGroup> {
    match level {
        SelectionLevel::Percentile { basis_points } => percentile_select(counts, basis_points, tie_mode),
        SelectionLevel::Css(css) => css_select(counts, css),
    }
}
