//! Publications, journals and citation events, indexed by partition cell.
//!
//! A partition cell is the set of publications whose journal carries one
//! exact combination of subject categories. Journals in `{A}`, `{P}` and
//! `{A, P}` therefore give three disjoint cells, `A`, `P` and `A|P`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::fs::File;
use std::io::{Read, Write};
use std::path::Path;

use crate::error::{Error, LoadError, Result, Violation};

pub const PUBLICATIONS_FILE: &str = "publications.csv";
pub const JOURNALS_FILE: &str = "journals.csv";
pub const CITATIONS_FILE: &str = "citations.csv";

pub const DEFAULT_DOC_TYPE: &str = "article";

/// Separator between category names inside a [`CellKey`].
pub const CELL_SEPARATOR: char = '|';
/// Separator between category names in `journals.csv`.
pub const CATEGORY_SEPARATOR: char = ';';

// Characters that would break one of the three file formats or the cell key.
const FORBIDDEN_ID_CHARS: &[char] = &[',', ';', '|', '"', '\n', '\r'];

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Publication {
    pub id: String,
    pub journal_id: String,
    pub pub_year: i32,
    pub doc_type: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Journal {
    pub id: String,
    pub categories: BTreeSet<String>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CitationEvent {
    pub publication_id: String,
    pub citing_year: i32,
}

/// Canonical name of a subject-category combination: the sorted, trimmed,
/// de-duplicated category names joined by `|`.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct CellKey(String);

impl CellKey {
    pub fn from_categories<I, S>(categories: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let set: BTreeSet<String> = categories
            .into_iter()
            .map(|c| c.as_ref().trim().to_string())
            .filter(|c| !c.is_empty())
            .collect();
        let parts: Vec<&str> = set.iter().map(String::as_str).collect();
        CellKey(parts.join("|"))
    }

    /// Parses a `|`-separated key, canonicalizing the order.
    pub fn parse(key: &str) -> Self {
        CellKey::from_categories(key.split(CELL_SEPARATOR))
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }

    pub fn categories(&self) -> impl Iterator<Item = &str> {
        self.0.split(CELL_SEPARATOR)
    }
}

impl fmt::Display for CellKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

/// Which document types survive loading.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum DocTypeFilter {
    Only(String),
    Any,
}

impl Default for DocTypeFilter {
    fn default() -> Self {
        DocTypeFilter::Only(DEFAULT_DOC_TYPE.to_string())
    }
}

impl DocTypeFilter {
    fn admits(&self, doc_type: &str) -> bool {
        match self {
            DocTypeFilter::Only(t) => t == doc_type,
            DocTypeFilter::Any => true,
        }
    }
}

/// Records dropped by the document-type filter.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct LoadReport {
    pub dropped_publications: usize,
    pub dropped_events: usize,
}

/// Validated, indexed and immutable corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Corpus {
    publications: Vec<Publication>,
    journals: Vec<Journal>,
    events: Vec<CitationEvent>,
    pub_index: HashMap<String, usize>,
    journal_cells: BTreeMap<String, CellKey>,
    cell_index: BTreeMap<CellKey, BTreeSet<String>>,
    // Per publication, events counted by year offset up to the horizon.
    series: Vec<Vec<u64>>,
    horizon_year: Option<i32>,
}

/// Maps each journal to the cell of its exact category set.
pub fn derive_partition_cells(journals: &[Journal]) -> BTreeMap<String, CellKey> {
    journals
        .iter()
        .map(|j| (j.id.clone(), CellKey::from_categories(&j.categories)))
        .collect()
}

/// Loads a corpus from the three CSV streams.
pub fn load_corpus<P: Read, J: Read, C: Read>(
    publications: P,
    journals: J,
    citations: C,
    filter: &DocTypeFilter,
) -> Result<(Corpus, LoadReport)> {
    let mut violations = Vec::new();
    let pubs = parse_publications(publications, &mut violations)?;
    let journals = parse_journals(journals, &mut violations)?;
    let events = parse_citations(citations, &mut violations)?;
    let built = build(pubs, journals, events, filter, violations)?;
    Ok(built)
}

impl Corpus {
    /// Loads `publications.csv`, `journals.csv` and `citations.csv` from a
    /// directory.
    pub fn load_dir(dir: impl AsRef<Path>, filter: &DocTypeFilter) -> Result<(Corpus, LoadReport)> {
        let dir = dir.as_ref();
        let open = |name: &str| {
            File::open(dir.join(name)).map_err(|source| Error::Io {
                file: dir.join(name).display().to_string(),
                source,
            })
        };
        load_corpus(
            open(PUBLICATIONS_FILE)?,
            open(JOURNALS_FILE)?,
            open(CITATIONS_FILE)?,
            filter,
        )
    }

    /// Builds a corpus from in-memory records, validating exactly as the
    /// CSV loader does. Row numbers in violations count the header as 1.
    pub fn from_parts(
        publications: Vec<Publication>,
        journals: Vec<Journal>,
        events: Vec<CitationEvent>,
        filter: &DocTypeFilter,
    ) -> Result<(Corpus, LoadReport)> {
        let tag = |i: usize| i as u64 + 2;
        let pubs = publications.into_iter().enumerate().map(|(i, p)| (tag(i), p)).collect();
        let journals = journals.into_iter().enumerate().map(|(i, j)| (tag(i), j)).collect();
        let events = events.into_iter().enumerate().map(|(i, e)| (tag(i), e)).collect();
        build(pubs, journals, events, filter, Vec::new())
    }

    pub fn publications(&self) -> &[Publication] {
        &self.publications
    }

    pub fn journals(&self) -> &[Journal] {
        &self.journals
    }

    pub fn events(&self) -> &[CitationEvent] {
        &self.events
    }

    pub fn publication(&self, id: &str) -> Option<&Publication> {
        self.pub_index.get(id).map(|&i| &self.publications[i])
    }

    /// Latest year present in the data (citing years and publication years).
    pub fn horizon_year(&self) -> Option<i32> {
        self.horizon_year
    }

    pub fn cells(&self) -> impl Iterator<Item = &CellKey> {
        self.cell_index.keys()
    }

    pub fn cell_sizes(&self) -> impl Iterator<Item = (&CellKey, usize)> {
        self.cell_index.iter().map(|(k, v)| (k, v.len()))
    }

    pub fn contains_cell(&self, cell: &CellKey) -> bool {
        self.cell_index.contains_key(cell)
    }

    /// Publication ids whose journal maps to `cell`.
    pub fn cell_members(&self, cell: &CellKey) -> Result<&BTreeSet<String>> {
        self.cell_index
            .get(cell)
            .ok_or_else(|| Error::UnknownCell(cell.to_string()))
    }

    pub fn journal_cell(&self, journal_id: &str) -> Option<&CellKey> {
        self.journal_cells.get(journal_id)
    }

    pub fn publication_cell(&self, id: &str) -> Option<&CellKey> {
        self.publication(id).and_then(|p| self.journal_cell(&p.journal_id))
    }

    /// Longest window length the corpus can answer for a publication.
    pub fn max_window(&self, id: &str) -> Result<u32> {
        let idx = self.index_of(id)?;
        Ok(self.series[idx].len() as u32)
    }

    pub(crate) fn index_of(&self, id: &str) -> Result<usize> {
        self.pub_index
            .get(id)
            .copied()
            .ok_or_else(|| Error::UnknownPublication(id.to_string()))
    }

    pub(crate) fn series_at(&self, idx: usize) -> &[u64] {
        &self.series[idx]
    }

    pub fn write_publications<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["id", "journal_id", "year", "doc_type"])?;
        for p in &self.publications {
            w.write_record([&p.id, &p.journal_id, &p.pub_year.to_string(), &p.doc_type])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_journals<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["journal_id", "categories"])?;
        for j in &self.journals {
            let cats: Vec<&str> = j.categories.iter().map(String::as_str).collect();
            w.write_record([j.id.as_str(), &cats.join(";")])?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn write_citations<W: Write>(&self, out: W) -> Result<(), csv::Error> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["publication_id", "citing_year"])?;
        for e in &self.events {
            w.write_record([&e.publication_id, &e.citing_year.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    /// Writes the three corpus files into `dir`, which must exist.
    pub fn write_dir(&self, dir: impl AsRef<Path>) -> Result<()> {
        let dir = dir.as_ref();
        let io = |name: &str, source: std::io::Error| Error::Io {
            file: dir.join(name).display().to_string(),
            source,
        };
        type WriteFn = fn(&Corpus, File) -> Result<(), csv::Error>;
        let files: [(&str, WriteFn); 3] = [
            (PUBLICATIONS_FILE, |c, f| c.write_publications(f)),
            (JOURNALS_FILE, |c, f| c.write_journals(f)),
            (CITATIONS_FILE, |c, f| c.write_citations(f)),
        ];
        for (name, write) in files {
            let file = File::create(dir.join(name)).map_err(|e| io(name, e))?;
            write(self, file).map_err(|e| io(name, std::io::Error::other(e)))?;
        }
        Ok(())
    }
}

type Tagged<T> = Vec<(u64, T)>;

fn violation(file: &str, row: u64, field: &str, message: impl Into<String>) -> Violation {
    Violation {
        file: file.to_string(),
        row,
        field: field.to_string(),
        message: message.into(),
    }
}

fn check_id(value: &str, file: &str, row: u64, field: &str, out: &mut Vec<Violation>) -> bool {
    if value.is_empty() {
        out.push(violation(file, row, field, "must not be empty"));
        false
    } else if value.contains(FORBIDDEN_ID_CHARS) {
        out.push(violation(file, row, field, format!("`{value}` contains a separator character")));
        false
    } else {
        true
    }
}

/// Reads a CSV stream into (line, record) pairs after checking the header.
/// `columns` lists (name, required); required columns must come first.
fn read_records<R: Read>(
    input: R,
    file: &str,
    columns: &[(&str, bool)],
    violations: &mut Vec<Violation>,
) -> Result<Vec<(u64, Vec<String>)>> {
    let mut reader = csv::ReaderBuilder::new()
        .flexible(true)
        .trim(csv::Trim::All)
        .from_reader(input);
    let io_err = |e: csv::Error| csv_io_error(e, file);
    let headers = match reader.headers() {
        Ok(h) => h.clone(),
        Err(e) if e.is_io_error() => return Err(io_err(e)),
        Err(e) => {
            violations.push(violation(file, 1, "header", e.to_string()));
            return Ok(Vec::new());
        }
    };
    if headers.is_empty() || (headers.len() == 1 && headers[0].is_empty()) {
        return Ok(Vec::new());
    }
    let required = columns.iter().filter(|(_, r)| *r).count();
    let names: Vec<&str> = headers.iter().collect();
    let expected: Vec<&str> = columns.iter().map(|(n, _)| *n).collect();
    if names.len() < required || names.len() > columns.len() || names[..] != expected[..names.len()] {
        violations.push(violation(
            file,
            1,
            "header",
            format!("expected `{}`, found `{}`", expected.join(","), names.join(",")),
        ));
        return Ok(Vec::new());
    }
    let width = names.len();
    let mut rows = Vec::new();
    let mut record = csv::StringRecord::new();
    loop {
        match reader.read_record(&mut record) {
            Ok(false) => break,
            Ok(true) => {
                let line = record.position().map_or(0, |p| p.line());
                if record.len() == 1 && record[0].is_empty() {
                    continue;
                }
                if record.len() < required {
                    violations.push(violation(
                        file,
                        line,
                        columns[record.len()].0,
                        "missing field",
                    ));
                    continue;
                }
                if record.len() > width {
                    violations.push(violation(
                        file,
                        line,
                        "row",
                        format!("{} fields, expected at most {width}", record.len()),
                    ));
                    continue;
                }
                rows.push((line, record.iter().map(str::to_string).collect()));
            }
            Err(e) if e.is_io_error() => return Err(io_err(e)),
            Err(e) => {
                let line = e.position().map_or(0, |p| p.line());
                violations.push(violation(file, line, "row", e.to_string()));
                // A decoding error does not advance past the record on its own.
                if matches!(e.kind(), csv::ErrorKind::Utf8 { .. }) {
                    continue;
                }
                break;
            }
        }
    }
    Ok(rows)
}

fn csv_io_error(e: csv::Error, file: &str) -> Error {
    let source = match e.into_kind() {
        csv::ErrorKind::Io(source) => source,
        other => std::io::Error::other(format!("{other:?}")),
    };
    Error::Io { file: file.to_string(), source }
}

fn parse_year(value: &str, file: &str, row: u64, field: &str, out: &mut Vec<Violation>) -> Option<i32> {
    match value.parse::<i32>() {
        Ok(y) => Some(y),
        Err(_) => {
            out.push(violation(file, row, field, format!("`{value}` is not an integer year")));
            None
        }
    }
}

fn parse_publications<R: Read>(input: R, out: &mut Vec<Violation>) -> Result<Tagged<Publication>> {
    let file = PUBLICATIONS_FILE;
    let rows = read_records(
        input,
        file,
        &[("id", true), ("journal_id", true), ("year", true), ("doc_type", false)],
        out,
    )?;
    let mut pubs = Vec::with_capacity(rows.len());
    for (line, fields) in rows {
        let Some(pub_year) = parse_year(&fields[2], file, line, "year", out) else {
            continue;
        };
        let doc_type = match fields.get(3) {
            Some(t) if !t.is_empty() => t.clone(),
            _ => DEFAULT_DOC_TYPE.to_string(),
        };
        let mut fields = fields.into_iter();
        pubs.push((
            line,
            Publication {
                id: fields.next().unwrap_or_default(),
                journal_id: fields.next().unwrap_or_default(),
                pub_year,
                doc_type,
            },
        ));
    }
    Ok(pubs)
}

fn parse_journals<R: Read>(input: R, out: &mut Vec<Violation>) -> Result<Tagged<Journal>> {
    let file = JOURNALS_FILE;
    let rows = read_records(input, file, &[("journal_id", true), ("categories", true)], out)?;
    let mut journals = Vec::with_capacity(rows.len());
    for (line, mut fields) in rows {
        let raw = fields.pop().unwrap_or_default();
        let id = fields.pop().unwrap_or_default();
        let mut categories = BTreeSet::new();
        let mut ok = true;
        for part in raw.split(CATEGORY_SEPARATOR) {
            let name = part.trim();
            if name.is_empty() {
                if !raw.trim().is_empty() {
                    out.push(violation(file, line, "categories", "empty category name"));
                    ok = false;
                }
                continue;
            }
            if name.contains(CELL_SEPARATOR) {
                out.push(violation(file, line, "categories", format!("`{name}` contains `|`")));
                ok = false;
                continue;
            }
            categories.insert(name.to_string());
        }
        if ok {
            journals.push((line, Journal { id, categories }));
        }
    }
    Ok(journals)
}

fn parse_citations<R: Read>(input: R, out: &mut Vec<Violation>) -> Result<Tagged<CitationEvent>> {
    let file = CITATIONS_FILE;
    let rows = read_records(input, file, &[("publication_id", true), ("citing_year", true)], out)?;
    let mut events = Vec::with_capacity(rows.len());
    for (line, fields) in rows {
        let Some(citing_year) = parse_year(&fields[1], file, line, "citing_year", out) else {
            continue;
        };
        events.push((
            line,
            CitationEvent {
                publication_id: fields[0].clone(),
                citing_year,
            },
        ));
    }
    Ok(events)
}

fn build(
    publications: Tagged<Publication>,
    journals: Tagged<Journal>,
    events: Tagged<CitationEvent>,
    filter: &DocTypeFilter,
    mut violations: Vec<Violation>,
) -> Result<(Corpus, LoadReport)> {
    let mut report = LoadReport::default();

    let mut journal_ids = HashMap::new();
    let mut kept_journals = Vec::with_capacity(journals.len());
    for (row, mut j) in journals {
        let file = JOURNALS_FILE;
        if !check_id(&j.id, file, row, "journal_id", &mut violations) {
            continue;
        }
        j.categories = j
            .categories
            .iter()
            .map(|c| c.trim().to_string())
            .filter(|c| !c.is_empty())
            .collect();
        if j.categories.is_empty() {
            violations.push(violation(file, row, "categories", "journal has no categories"));
            continue;
        }
        if let Some(first) = journal_ids.insert(j.id.clone(), row) {
            violations.push(violation(
                file,
                row,
                "journal_id",
                format!("duplicate journal id `{}` (first at row {first})", j.id),
            ));
            continue;
        }
        kept_journals.push(j);
    }

    // id -> (row, pub_year, kept)
    let mut seen: HashMap<String, (u64, i32, bool)> = HashMap::new();
    let mut kept_pubs = Vec::with_capacity(publications.len());
    for (row, p) in publications {
        let file = PUBLICATIONS_FILE;
        let id_ok = check_id(&p.id, file, row, "id", &mut violations);
        let journal_ok = check_id(&p.journal_id, file, row, "journal_id", &mut violations);
        if journal_ok && !journal_ids.contains_key(&p.journal_id) {
            violations.push(violation(
                file,
                row,
                "journal_id",
                format!("unknown journal `{}`", p.journal_id),
            ));
        }
        if !id_ok {
            continue;
        }
        if let Some((first, _, _)) = seen.get(&p.id) {
            violations.push(violation(
                file,
                row,
                "id",
                format!("duplicate publication id `{}` (first at row {first})", p.id),
            ));
            continue;
        }
        let keep = filter.admits(&p.doc_type);
        seen.insert(p.id.clone(), (row, p.pub_year, keep));
        if keep {
            kept_pubs.push(p);
        } else {
            report.dropped_publications += 1;
        }
    }

    let mut kept_events = Vec::with_capacity(events.len());
    for (row, e) in events {
        let file = CITATIONS_FILE;
        match seen.get(&e.publication_id) {
            None => violations.push(violation(
                file,
                row,
                "publication_id",
                format!("unknown publication `{}`", e.publication_id),
            )),
            Some(&(_, pub_year, keep)) => {
                if e.citing_year < pub_year {
                    violations.push(violation(
                        file,
                        row,
                        "citing_year",
                        format!(
                            "citing year {} precedes publication year {pub_year} of `{}`",
                            e.citing_year, e.publication_id
                        ),
                    ));
                } else if keep {
                    kept_events.push(e);
                } else {
                    report.dropped_events += 1;
                }
            }
        }
    }

    if !violations.is_empty() {
        violations.sort_by(|a, b| (&a.file, a.row).cmp(&(&b.file, b.row)));
        return Err(LoadError { violations }.into());
    }

    let journal_cells = derive_partition_cells(&kept_journals);
    let mut cell_index: BTreeMap<CellKey, BTreeSet<String>> = journal_cells
        .values()
        .map(|k| (k.clone(), BTreeSet::new()))
        .collect();
    let mut pub_index = HashMap::with_capacity(kept_pubs.len());
    for (i, p) in kept_pubs.iter().enumerate() {
        pub_index.insert(p.id.clone(), i);
        let cell = &journal_cells[&p.journal_id];
        cell_index.get_mut(cell).expect("cell of known journal").insert(p.id.clone());
    }

    let horizon_year = kept_events
        .iter()
        .map(|e| e.citing_year)
        .chain(kept_pubs.iter().map(|p| p.pub_year))
        .max();
    let mut series: Vec<Vec<u64>> = kept_pubs
        .iter()
        .map(|p| {
            let len = horizon_year.map_or(0, |h| (h - p.pub_year + 1) as usize);
            vec![0; len]
        })
        .collect();
    for e in &kept_events {
        let i = pub_index[&e.publication_id];
        let offset = (e.citing_year - kept_pubs[i].pub_year) as usize;
        series[i][offset] += 1;
    }

    Ok((
        Corpus {
            publications: kept_pubs,
            journals: kept_journals,
            events: kept_events,
            pub_index,
            journal_cells,
            cell_index,
            series,
            horizon_year,
        },
        report,
    ))
}
