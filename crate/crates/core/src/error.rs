use std::fmt;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

/// One validation failure in an input file.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub file: String,
    /// 1-based line number; the header is line 1.
    pub row: u64,
    pub field: String,
    pub message: String,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}: {}", self.file, self.row, self.field, self.message)
    }
}

/// Every violation found while loading a corpus.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct LoadError {
    pub violations: Vec<Violation>,
}

impl fmt::Display for LoadError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} corpus violation(s)", self.violations.len())?;
        for v in &self.violations {
            write!(f, "\n  {v}")?;
        }
        Ok(())
    }
}

impl std::error::Error for LoadError {}

#[derive(Debug, Error)]
pub enum Error {
    #[error(transparent)]
    Load(#[from] LoadError),
    #[error("reading {file}: {source}")]
    Io {
        file: String,
        #[source]
        source: std::io::Error,
    },
    #[error("unknown publication `{0}`")]
    UnknownPublication(String),
    #[error("unknown cell `{0}`")]
    UnknownCell(String),
    #[error("window length must be at least 1, got {0}")]
    InvalidWindow(u32),
    #[error(
        "window length {length} exceeds the corpus horizon for publication `{publication}` \
         (horizon year {horizon_year}, maximum length {max_length})"
    )]
    WindowBeyondHorizon {
        publication: String,
        length: u32,
        max_length: u32,
        horizon_year: i32,
    },
    #[error("css thresholds need at least one count")]
    EmptyCounts,
    #[error("reference set is empty")]
    EmptyReferenceSet,
    #[error("basis points must lie in 1..=10000, got {0}")]
    BasisPoints(u32),
    #[error("an overlap curve needs at least two groups, got {0}")]
    TooFewGroups(usize),
    #[error("groups do not form a consecutive sequence: {0}")]
    NonConsecutiveGroups(String),
    #[error("publication set is empty")]
    EmptySet,
    #[error("threshold must lie in (0, 1], got {0}")]
    InvalidThreshold(String),
    #[error("invalid synthetic config:\n  {}", .0.join("\n  "))]
    InvalidConfig(Vec<String>),
    #[error("unknown preset `{0}`")]
    UnknownPreset(String),
}
