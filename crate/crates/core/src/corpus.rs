//! Corpus ingestion and the immutable in-memory paper model.

use std::collections::{BTreeSet, HashMap};
use std::io::BufRead;

use serde::{Deserialize, Serialize};

use crate::ids::{AuthorId, InstId, JournalId, PaperIdx};
use crate::normalize::{normalize_affiliation, normalize_author, AliasTable};

/// Earliest accepted publication year.
pub const MIN_YEAR: i32 = 1800;

/// Journal key used for papers whose journal field is missing or blank.
pub const UNKNOWN_JOURNAL: &str = "UNKNOWN";

/// One line of the JSON-Lines input.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RawPaper {
    pub id: Option<String>,
    pub year: Option<i64>,
    #[serde(default)]
    pub journal: Option<String>,
    #[serde(default)]
    pub title: Option<String>,
    pub authors: Option<Vec<RawAuthor>>,
    #[serde(default)]
    pub references: Vec<String>,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct RawAuthor {
    pub name: String,
    #[serde(default)]
    pub affiliations: Vec<String>,
    #[serde(default)]
    pub country: Option<String>,
}

impl RawAuthor {
    pub fn new(name: &str, affiliations: &[&str], country: Option<&str>) -> Self {
        Self {
            name: name.to_string(),
            affiliations: affiliations.iter().map(|s| s.to_string()).collect(),
            country: country.map(str::to_string),
        }
    }
}

impl RawPaper {
    /// Convenience constructor for a fully specified record.
    pub fn new(id: &str, year: i64, journal: &str, authors: Vec<RawAuthor>, references: &[&str]) -> Self {
        Self {
            id: Some(id.to_string()),
            year: Some(year),
            journal: Some(journal.to_string()),
            title: Some(String::new()),
            authors: Some(authors),
            references: references.iter().map(|s| s.to_string()).collect(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AuthorMention {
    pub author: AuthorId,
    /// Normalized affiliations in listed order; the first is the primary
    /// institution. May be empty.
    pub affiliations: Vec<InstId>,
    pub position: usize,
}

impl AuthorMention {
    pub fn primary_institution(&self) -> Option<InstId> {
        self.affiliations.first().copied()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Paper {
    pub id: String,
    pub year: i32,
    pub journal: JournalId,
    pub title: String,
    /// One mention per distinct author key, in byline order.
    pub authors: Vec<AuthorMention>,
    /// De-duplicated reference ids, self-references removed.
    pub references: Vec<String>,
}

impl Paper {
    pub fn author_ids(&self) -> impl Iterator<Item = AuthorId> + '_ {
        self.authors.iter().map(|m| m.author)
    }

    pub fn has_author(&self, a: AuthorId) -> bool {
        self.authors.iter().any(|m| m.author == a)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Institution {
    pub key: String,
    /// `None` is the explicit unknown-country sentinel.
    pub country: Option<String>,
}

/// A reference whose target is not in the corpus.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DanglingRef {
    pub citing: PaperIdx,
    pub target: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RecordIssue {
    Malformed(String),
    MissingField(&'static str),
    YearOutOfRange(i64),
    NoAuthors,
    BadAuthor(String),
}

impl std::fmt::Display for RecordIssue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RecordIssue::Malformed(e) => write!(f, "malformed JSON: {e}"),
            RecordIssue::MissingField(field) => write!(f, "missing required field `{field}`"),
            RecordIssue::YearOutOfRange(y) => write!(f, "year {y} out of range"),
            RecordIssue::NoAuthors => write!(f, "author list is empty"),
            RecordIssue::BadAuthor(e) => write!(f, "{e}"),
        }
    }
}

/// A record that was rejected without aborting ingestion.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RecordError {
    /// 1-based input line.
    pub line: usize,
    pub id: Option<String>,
    pub issue: RecordIssue,
}

#[derive(Debug, thiserror::Error)]
pub enum CorpusError {
    #[error("duplicate paper id {id:?} on line {line} (first seen on line {first_line})")]
    DuplicateId { id: String, line: usize, first_line: usize },
    #[error("failed to read input: {0}")]
    Io(#[from] std::io::Error),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum InputFormat {
    #[default]
    Jsonl,
}

#[derive(Debug, Clone, Default)]
pub struct IngestOptions {
    pub affiliation_aliases: AliasTable,
    pub author_aliases: AliasTable,
    /// Upper bound on accepted years; defaults to the current calendar year.
    pub max_year: Option<i32>,
}

/// Output of [`ingest`]: the admitted corpus plus every rejected record.
#[derive(Debug)]
pub struct Ingested {
    pub corpus: Corpus,
    pub errors: Vec<RecordError>,
}

#[derive(Debug, Clone, Default)]
pub struct Corpus {
    papers: Vec<Paper>,
    by_id: HashMap<String, PaperIdx>,
    author_keys: Vec<String>,
    institutions: Vec<Institution>,
    journals: Vec<String>,
    edges: Vec<(PaperIdx, PaperIdx)>,
    dangling: Vec<DanglingRef>,
    year_anomalies: Vec<(PaperIdx, PaperIdx)>,
    references: Vec<Vec<PaperIdx>>,
    cited_by: Vec<Vec<PaperIdx>>,
    papers_by_author: Vec<Vec<PaperIdx>>,
    papers_by_journal: Vec<Vec<PaperIdx>>,
}

impl Corpus {
    pub fn len(&self) -> usize {
        self.papers.len()
    }

    pub fn is_empty(&self) -> bool {
        self.papers.is_empty()
    }

    pub fn papers(&self) -> &[Paper] {
        &self.papers
    }

    pub fn paper(&self, idx: PaperIdx) -> &Paper {
        &self.papers[idx.index()]
    }

    pub fn lookup(&self, id: &str) -> Option<PaperIdx> {
        self.by_id.get(id).copied()
    }

    pub fn paper_indices(&self) -> impl ExactSizeIterator<Item = PaperIdx> {
        (0..self.papers.len()).map(PaperIdx::from_index)
    }

    pub fn author_count(&self) -> usize {
        self.author_keys.len()
    }

    pub fn author_key(&self, a: AuthorId) -> &str {
        &self.author_keys[a.index()]
    }

    pub fn author_by_key(&self, key: &str) -> Option<AuthorId> {
        self.author_keys
            .iter()
            .position(|k| k == key)
            .map(AuthorId::from_index)
    }

    pub fn institutions(&self) -> &[Institution] {
        &self.institutions
    }

    pub fn institution(&self, i: InstId) -> &Institution {
        &self.institutions[i.index()]
    }

    pub fn institution_by_key(&self, key: &str) -> Option<InstId> {
        self.institutions
            .iter()
            .position(|inst| inst.key == key)
            .map(InstId::from_index)
    }

    pub fn journal_count(&self) -> usize {
        self.journals.len()
    }

    pub fn journal_key(&self, j: JournalId) -> &str {
        &self.journals[j.index()]
    }

    /// Resolved citation edges `(citing, cited)`, in ingestion order.
    pub fn edges(&self) -> &[(PaperIdx, PaperIdx)] {
        &self.edges
    }

    pub fn dangling(&self) -> &[DanglingRef] {
        &self.dangling
    }

    /// Edges whose citing paper predates the cited one by more than one year.
    pub fn year_anomalies(&self) -> &[(PaperIdx, PaperIdx)] {
        &self.year_anomalies
    }

    /// In-corpus references of `p`.
    pub fn references_of(&self, p: PaperIdx) -> &[PaperIdx] {
        &self.references[p.index()]
    }

    /// Papers citing `p`.
    pub fn citers_of(&self, p: PaperIdx) -> &[PaperIdx] {
        &self.cited_by[p.index()]
    }

    pub fn papers_of_author(&self, a: AuthorId) -> &[PaperIdx] {
        &self.papers_by_author[a.index()]
    }

    pub fn papers_of_journal(&self, j: JournalId) -> &[PaperIdx] {
        &self.papers_by_journal[j.index()]
    }

    pub fn max_year(&self) -> Option<i32> {
        self.papers.iter().map(|p| p.year).max()
    }

    /// Union of the affiliation keys attached to any author mention of `p`.
    pub fn affiliations_of(&self, p: PaperIdx) -> BTreeSet<InstId> {
        self.paper(p)
            .authors
            .iter()
            .flat_map(|m| m.affiliations.iter().copied())
            .collect()
    }

    /// Build a corpus directly from records; any record-level problem is
    /// returned in [`Ingested::errors`] with its position as the line number.
    pub fn from_records<I>(records: I, options: &IngestOptions) -> Result<Ingested, CorpusError>
    where
        I: IntoIterator<Item = RawPaper>,
    {
        let mut builder = CorpusBuilder::new(options);
        for (i, rec) in records.into_iter().enumerate() {
            builder.add(rec, i + 1)?;
        }
        Ok(builder.finish())
    }
}

/// Read a corpus from a stream.
pub fn ingest<R: BufRead>(source: R, format: InputFormat, options: &IngestOptions) -> Result<Ingested, CorpusError> {
    match format {
        InputFormat::Jsonl => ingest_jsonl(source, options),
    }
}

fn ingest_jsonl<R: BufRead>(source: R, options: &IngestOptions) -> Result<Ingested, CorpusError> {
    let mut builder = CorpusBuilder::new(options);
    for (i, line) in source.lines().enumerate() {
        let line_no = i + 1;
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<RawPaper>(&line) {
            Ok(rec) => builder.add(rec, line_no)?,
            Err(e) => builder.errors.push(RecordError {
                line: line_no,
                id: None,
                issue: RecordIssue::Malformed(e.to_string()),
            }),
        }
    }
    Ok(builder.finish())
}

struct Interner {
    keys: Vec<String>,
    lookup: HashMap<String, u32>,
}

impl Interner {
    fn new() -> Self {
        Self { keys: Vec::new(), lookup: HashMap::new() }
    }

    fn intern(&mut self, key: String) -> usize {
        if let Some(&i) = self.lookup.get(&key) {
            return i as usize;
        }
        let i = self.keys.len();
        self.lookup.insert(key.clone(), i as u32);
        self.keys.push(key);
        i
    }
}

struct CorpusBuilder<'a> {
    options: &'a IngestOptions,
    max_year: i32,
    papers: Vec<Paper>,
    first_line: HashMap<String, usize>,
    authors: Interner,
    institutions: Interner,
    countries: Vec<Option<String>>,
    journals: Interner,
    errors: Vec<RecordError>,
}

impl<'a> CorpusBuilder<'a> {
    fn new(options: &'a IngestOptions) -> Self {
        use chrono::Datelike;
        let max_year = options.max_year.unwrap_or_else(|| chrono::Utc::now().year());
        Self {
            options,
            max_year,
            papers: Vec::new(),
            first_line: HashMap::new(),
            authors: Interner::new(),
            institutions: Interner::new(),
            countries: Vec::new(),
            journals: Interner::new(),
            errors: Vec::new(),
        }
    }

    fn reject(&mut self, line: usize, id: Option<String>, issue: RecordIssue) {
        self.errors.push(RecordError { line, id, issue });
    }

    fn add(&mut self, rec: RawPaper, line: usize) -> Result<(), CorpusError> {
        let Some(id) = rec.id.map(|s| s.trim().to_string()).filter(|s| !s.is_empty()) else {
            self.reject(line, None, RecordIssue::MissingField("id"));
            return Ok(());
        };
        if let Some(&first_line) = self.first_line.get(&id) {
            return Err(CorpusError::DuplicateId { id, line, first_line });
        }
        let Some(year) = rec.year else {
            self.reject(line, Some(id), RecordIssue::MissingField("year"));
            return Ok(());
        };
        if year < i64::from(MIN_YEAR) || year > i64::from(self.max_year) {
            self.reject(line, Some(id), RecordIssue::YearOutOfRange(year));
            return Ok(());
        }
        let Some(raw_authors) = rec.authors else {
            self.reject(line, Some(id), RecordIssue::MissingField("authors"));
            return Ok(());
        };
        if raw_authors.is_empty() {
            self.reject(line, Some(id), RecordIssue::NoAuthors);
            return Ok(());
        }

        // Normalize everything before interning so a rejected record leaves
        // no trace in the lookup tables.
        let mut normalized: Vec<(String, Vec<String>, Option<String>)> = Vec::new();
        for ra in &raw_authors {
            let key = match normalize_author(&ra.name) {
                Ok(k) => self.options.author_aliases.resolve(k),
                Err(e) => {
                    self.reject(line, Some(id), RecordIssue::BadAuthor(e.to_string()));
                    return Ok(());
                }
            };
            if normalized.iter().any(|(k, _, _)| *k == key) {
                log::warn!("line {line}: author {key:?} listed twice on {id:?}; keeping first mention");
                continue;
            }
            let mut affs: Vec<String> = Vec::new();
            for raw in &ra.affiliations {
                match normalize_affiliation(raw, &self.options.affiliation_aliases) {
                    Ok(k) if !affs.contains(&k) => affs.push(k),
                    Ok(_) => {}
                    Err(_) => log::warn!("line {line}: ignoring blank affiliation on {id:?}"),
                }
            }
            let country = ra
                .country
                .as_deref()
                .and_then(|c| crate::normalize::normalize_affiliation_raw(c).ok());
            normalized.push((key, affs, country));
        }

        let mut authors = Vec::with_capacity(normalized.len());
        for (position, (key, affs, country)) in normalized.into_iter().enumerate() {
            let author = AuthorId::from_index(self.authors.intern(key));
            let affiliations: Vec<InstId> = affs
                .into_iter()
                .map(|k| {
                    let i = self.institutions.intern(k);
                    if i == self.countries.len() {
                        self.countries.push(None);
                    }
                    InstId::from_index(i)
                })
                .collect();
            // A mention's country describes its primary institution.
            if let (Some(primary), Some(c)) = (affiliations.first(), country) {
                let slot = &mut self.countries[primary.index()];
                if slot.is_none() {
                    *slot = Some(c);
                }
            }
            authors.push(AuthorMention { author, affiliations, position });
        }

        let journal_key = rec
            .journal
            .map(|j| j.trim().to_string())
            .filter(|j| !j.is_empty())
            .unwrap_or_else(|| UNKNOWN_JOURNAL.to_string());
        let journal = JournalId::from_index(self.journals.intern(journal_key));

        let mut seen = BTreeSet::new();
        let references: Vec<String> = rec
            .references
            .into_iter()
            .map(|r| r.trim().to_string())
            .filter(|r| !r.is_empty() && *r != id && seen.insert(r.clone()))
            .collect();

        self.first_line.insert(id.clone(), line);
        self.papers.push(Paper {
            id,
            year: year as i32,
            journal,
            title: rec.title.unwrap_or_default(),
            authors,
            references,
        });
        Ok(())
    }

    fn finish(self) -> Ingested {
        let n = self.papers.len();
        let by_id: HashMap<String, PaperIdx> = self
            .papers
            .iter()
            .enumerate()
            .map(|(i, p)| (p.id.clone(), PaperIdx::from_index(i)))
            .collect();

        let mut edges = Vec::new();
        let mut dangling = Vec::new();
        let mut year_anomalies = Vec::new();
        let mut references = vec![Vec::new(); n];
        let mut cited_by = vec![Vec::new(); n];
        for (i, paper) in self.papers.iter().enumerate() {
            let citing = PaperIdx::from_index(i);
            for r in &paper.references {
                match by_id.get(r) {
                    Some(&cited) => {
                        edges.push((citing, cited));
                        references[i].push(cited);
                        cited_by[cited.index()].push(citing);
                        if paper.year < self.papers[cited.index()].year - 1 {
                            year_anomalies.push((citing, cited));
                        }
                    }
                    None => dangling.push(DanglingRef { citing, target: r.clone() }),
                }
            }
        }
        for list in &mut cited_by {
            list.sort_unstable();
        }

        let mut papers_by_author = vec![Vec::new(); self.authors.keys.len()];
        let mut papers_by_journal = vec![Vec::new(); self.journals.keys.len()];
        for (i, paper) in self.papers.iter().enumerate() {
            for m in &paper.authors {
                papers_by_author[m.author.index()].push(PaperIdx::from_index(i));
            }
            papers_by_journal[paper.journal.index()].push(PaperIdx::from_index(i));
        }

        if !year_anomalies.is_empty() {
            log::warn!("{} citation(s) point forward in time by more than one year", year_anomalies.len());
        }

        let institutions = self
            .institutions
            .keys
            .into_iter()
            .zip(self.countries)
            .map(|(key, country)| Institution { key, country })
            .collect();

        Ingested {
            corpus: Corpus {
                papers: self.papers,
                by_id,
                author_keys: self.authors.keys,
                institutions,
                journals: self.journals.keys,
                edges,
                dangling,
                year_anomalies,
                references,
                cited_by,
                papers_by_author,
                papers_by_journal,
            },
            errors: self.errors,
        }
    }
}
