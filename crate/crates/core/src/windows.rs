//! Citation counts per publication for a given window length.
//!
//! A window of length `L` covers the publication year (offset 0) and the
//! `L - 1` calendar years after it. Publications from 2004 with citations
//! collected until 2011 therefore support lengths 1 through 8.

use std::fmt;

use crate::corpus::{CellKey, Corpus};
use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct WindowLength(u32);

impl WindowLength {
    pub fn new(length: u32) -> Result<Self> {
        if length == 0 {
            return Err(Error::InvalidWindow(length));
        }
        Ok(WindowLength(length))
    }

    pub fn get(self) -> u32 {
        self.0
    }

    pub fn next(self) -> Self {
        WindowLength(self.0 + 1)
    }
}

impl fmt::Display for WindowLength {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// Events per year offset, from the publication year to the corpus horizon.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CitationVector {
    pub publication_id: String,
    pub counts_by_offset: Vec<u64>,
}

impl CitationVector {
    pub fn total(&self) -> u64 {
        self.counts_by_offset.iter().sum()
    }
}

pub fn citation_series(corpus: &Corpus, publication_id: &str) -> Result<CitationVector> {
    let idx = corpus.index_of(publication_id)?;
    Ok(CitationVector {
        publication_id: publication_id.to_string(),
        counts_by_offset: corpus.series_at(idx).to_vec(),
    })
}

fn window_count(corpus: &Corpus, idx: usize, id: &str, window: WindowLength) -> Result<u64> {
    let series = corpus.series_at(idx);
    let length = window.get();
    if length as usize > series.len() {
        return Err(Error::WindowBeyondHorizon {
            publication: id.to_string(),
            length,
            max_length: series.len() as u32,
            horizon_year: corpus.horizon_year().unwrap_or_default(),
        });
    }
    Ok(series[..length as usize].iter().sum())
}

/// Number of events with year offset below `window`.
pub fn citation_count(corpus: &Corpus, publication_id: &str, window: WindowLength) -> Result<u64> {
    let idx = corpus.index_of(publication_id)?;
    window_count(corpus, idx, publication_id, window)
}

/// Counts for every member of a reference set, in the order the selectors
/// rely on: count descending, then id ascending.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CellCounts {
    pub cell: CellKey,
    pub window: WindowLength,
    entries: Vec<(String, u64)>,
}

impl CellCounts {
    /// Wraps arbitrary (id, count) pairs, sorting them deterministically.
    pub fn from_entries(cell: CellKey, window: WindowLength, mut entries: Vec<(String, u64)>) -> Self {
        entries.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        CellCounts { cell, window, entries }
    }

    pub fn entries(&self) -> &[(String, u64)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn counts(&self) -> impl Iterator<Item = u64> + '_ {
        self.entries.iter().map(|(_, c)| *c)
    }
}

pub fn cell_counts(corpus: &Corpus, cell: &CellKey, window: WindowLength) -> Result<CellCounts> {
    let members = corpus.cell_members(cell)?;
    let mut entries = Vec::with_capacity(members.len());
    for id in members {
        let idx = corpus.index_of(id)?;
        entries.push((id.clone(), window_count(corpus, idx, id, window)?));
    }
    Ok(CellCounts::from_entries(cell.clone(), window, entries))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{load_corpus, DocTypeFilter};

    fn corpus(pubs: &str, cites: &str) -> Corpus {
        let journals = "journal_id,categories\nJ1,X\nJ2,Y\n";
        load_corpus(pubs.as_bytes(), journals.as_bytes(), cites.as_bytes(), &DocTypeFilter::default())
            .unwrap()
            .0
    }

    fn w(n: u32) -> WindowLength {
        WindowLength::new(n).unwrap()
    }

    // a: offsets 0,1,1,3  b: offsets 0,1,3  c: none. Horizon 2008.
    fn sample() -> Corpus {
        corpus(
            "id,journal_id,year\na,J1,2004\nb,J1,2004\nc,J2,2004\n",
            "publication_id,citing_year\na,2004\na,2005\na,2005\na,2007\nb,2004\nb,2005\nb,2007\nc,2004\nc,2008\n",
        )
    }

    #[test]
    fn zero_length_is_rejected() {
        assert!(matches!(WindowLength::new(0), Err(Error::InvalidWindow(0))));
    }

    #[test]
    fn series_counts_events_per_offset() {
        let c = sample();
        assert_eq!(citation_series(&c, "a").unwrap().counts_by_offset, [1, 2, 0, 1, 0]);
        assert!(matches!(citation_series(&c, "zz"), Err(Error::UnknownPublication(_))));
    }

    #[test]
    fn uncited_publication_has_zero_series() {
        let c = corpus("id,journal_id,year\na,J1,2004\nb,J1,2004\n", "publication_id,citing_year\nb,2006\n");
        let v = citation_series(&c, "a").unwrap();
        assert_eq!(v.counts_by_offset, [0, 0, 0]);
        for n in 1..=3 {
            assert_eq!(citation_count(&c, "a", w(n)).unwrap(), 0);
        }
    }

    #[test]
    fn count_uses_offsets_below_length() {
        let c = sample();
        // b has events at offsets 0, 1, 3.
        assert_eq!(citation_count(&c, "b", w(2)).unwrap(), 2);
        assert_eq!(citation_count(&c, "b", w(4)).unwrap(), 3);
        assert_eq!(citation_count(&c, "a", w(5)).unwrap(), citation_series(&c, "a").unwrap().total());
    }

    #[test]
    fn window_beyond_horizon_is_an_error() {
        let c = sample();
        let err = citation_count(&c, "a", w(6)).unwrap_err();
        assert!(matches!(err, Error::WindowBeyondHorizon { max_length: 5, horizon_year: 2008, .. }));
    }

    #[test]
    fn cell_counts_are_sorted_by_count_then_id() {
        let c = sample();
        let counts = cell_counts(&c, &CellKey::parse("X"), w(5)).unwrap();
        assert_eq!(counts.entries(), [("a".to_string(), 4), ("b".to_string(), 3)]);
        let ties = cell_counts(&c, &CellKey::parse("X"), w(1)).unwrap();
        assert_eq!(ties.entries(), [("a".to_string(), 1), ("b".to_string(), 1)]);
        assert!(cell_counts(&c, &CellKey::parse("Q"), w(1)).is_err());
    }

    #[test]
    fn empty_cell_gives_empty_counts() {
        let c = corpus("id,journal_id,year\na,J1,2004\n", "");
        assert!(cell_counts(&c, &CellKey::parse("Y"), w(1)).unwrap().is_empty());
    }
}
