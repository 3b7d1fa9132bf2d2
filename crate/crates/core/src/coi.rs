//! Conflict-of-interest classification of citation edges and the resulting
//! citation strengths.
//!
//! A citation whose endpoints share coauthorship history is a COI citation;
//! one whose endpoints only share an institution is a suspected COI citation.
//! Either kind is *positive* when some independent paper co-cites the two
//! endpoints, and *negative* otherwise. Negative edges are down-weighted by
//!
//! ```text
//! weight = exp(-rho * (t_current - t_cite + 1) * strength)
//! ```
//!
//! where `strength` sums per-author-pair rates (joint papers per year of
//! collaboration, or citing papers per year of citing history).

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::corpus::Corpus;
use crate::graph_index::{
    independent_cociters, AuthorCiteIndex, CoauthorIndex, HistoryScope, IndependenceMode, Indices,
};
use crate::ids::{AuthorId, PaperIdx};

/// Smallest weight a negative edge may receive.
pub const WEIGHT_FLOOR: f64 = 1e-12;

/// Default exponential decay constant.
pub const DEFAULT_RHO: f64 = 0.62;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "SCREAMING_SNAKE_CASE")]
pub enum CoiClass {
    Normal,
    PositiveCoi,
    NegativeCoi,
    PositiveSuspectedCoi,
    NegativeSuspectedCoi,
}

impl CoiClass {
    pub const ALL: [CoiClass; 5] = [
        CoiClass::Normal,
        CoiClass::PositiveCoi,
        CoiClass::NegativeCoi,
        CoiClass::PositiveSuspectedCoi,
        CoiClass::NegativeSuspectedCoi,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            CoiClass::Normal => "NORMAL",
            CoiClass::PositiveCoi => "POSITIVE_COI",
            CoiClass::NegativeCoi => "NEGATIVE_COI",
            CoiClass::PositiveSuspectedCoi => "POSITIVE_SUSPECTED_COI",
            CoiClass::NegativeSuspectedCoi => "NEGATIVE_SUSPECTED_COI",
        }
    }

    pub fn is_negative(self) -> bool {
        matches!(self, CoiClass::NegativeCoi | CoiClass::NegativeSuspectedCoi)
    }

    pub fn is_coi(self) -> bool {
        self != CoiClass::Normal
    }
}

impl fmt::Display for CoiClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CoiClass {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let norm = s.trim().to_ascii_uppercase().replace('-', "_");
        CoiClass::ALL
            .into_iter()
            .find(|c| c.as_str() == norm)
            .ok_or_else(|| format!("unknown COI class {s:?}"))
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum CoiError {
    #[error("citation year {cite_year} is after the evaluation year {t_current}")]
    NegativeSpan { cite_year: i32, t_current: i32 },
    #[error("strength must be finite and non-negative, got {0}")]
    BadStrength(f64),
    #[error("decay constant must be positive and finite, got {0}")]
    BadRho(f64),
    #[error("evaluation year {t_current} precedes the latest publication year {max_year}")]
    EvalYearTooEarly { t_current: i32, max_year: i32 },
    #[error("author pair has no recorded history")]
    MissingPair,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DecayParams {
    pub rho: f64,
    pub t_current: i32,
}

impl DecayParams {
    pub fn new(rho: f64, t_current: i32) -> Result<Self, CoiError> {
        if !(rho.is_finite() && rho > 0.0) {
            return Err(CoiError::BadRho(rho));
        }
        Ok(Self { rho, t_current })
    }

    /// Decay parameters for `corpus`: `t_current` defaults to its latest year.
    pub fn for_corpus(corpus: &Corpus, rho: f64, eval_year: Option<i32>) -> Result<Self, CoiError> {
        let max_year = corpus.max_year().unwrap_or(i32::MIN);
        let t_current = eval_year.unwrap_or(max_year);
        if t_current < max_year {
            return Err(CoiError::EvalYearTooEarly { t_current, max_year });
        }
        Self::new(rho, t_current)
    }
}

/// Options governing classification.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ClassifyOptions {
    pub decay: DecayParams,
    /// Restrict pair history to the trailing window of years ending at the
    /// citing year. `None` uses the full history up to the citing year.
    pub coi_window: Option<u32>,
}

impl ClassifyOptions {
    pub fn new(decay: DecayParams) -> Self {
        Self { decay, coi_window: None }
    }

    fn scope(&self, cite_year: i32) -> HistoryScope {
        HistoryScope::as_of(cite_year, self.coi_window)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WeightedEdge {
    pub citing: PaperIdx,
    pub cited: PaperIdx,
    pub class: CoiClass,
    /// Pairwise COI strength for negative classes, else 0.
    pub coi_strength: f64,
    /// Multiplier in (0, 1] used by the ranking iteration.
    pub weight: f64,
}

/// `N_coauthored / span` for one author pair.
pub fn author_ncoi_strength(
    x: AuthorId,
    y: AuthorId,
    index: &CoauthorIndex,
    scope: &HistoryScope,
) -> Result<f64, CoiError> {
    index.record_in(x, y, scope).map(|r| r.rate()).ok_or(CoiError::MissingPair)
}

/// `N_citing / span` for the ordered pair "x cites y".
pub fn author_nscoi_strength(
    x: AuthorId,
    y: AuthorId,
    index: &AuthorCiteIndex,
    scope: &HistoryScope,
) -> Result<f64, CoiError> {
    index.record_in(x, y, scope).map(|r| r.rate()).ok_or(CoiError::MissingPair)
}

/// Sum of coauthorship strengths over all (citing author, cited author) pairs.
pub fn paper_ncoi_strength(
    citing: PaperIdx,
    cited: PaperIdx,
    corpus: &Corpus,
    index: &CoauthorIndex,
    scope: &HistoryScope,
) -> f64 {
    let mut total = 0.0;
    for x in corpus.paper(citing).author_ids() {
        for y in corpus.paper(cited).author_ids() {
            if let Ok(s) = author_ncoi_strength(x, y, index, scope) {
                total += s;
            }
        }
    }
    total
}

/// Sum of citing-history strengths over all ordered author pairs.
pub fn paper_nscoi_strength(
    citing: PaperIdx,
    cited: PaperIdx,
    corpus: &Corpus,
    index: &AuthorCiteIndex,
    scope: &HistoryScope,
) -> f64 {
    let mut total = 0.0;
    for x in corpus.paper(citing).author_ids() {
        for y in corpus.paper(cited).author_ids() {
            if let Ok(s) = author_nscoi_strength(x, y, index, scope) {
                total += s;
            }
        }
    }
    total
}

fn decayed_weight(strength: f64, cite_year: i32, params: &DecayParams) -> Result<f64, CoiError> {
    if !(strength.is_finite() && strength >= 0.0) {
        return Err(CoiError::BadStrength(strength));
    }
    if cite_year > params.t_current {
        return Err(CoiError::NegativeSpan { cite_year, t_current: params.t_current });
    }
    let span = f64::from(params.t_current - cite_year + 1);
    let w = (-params.rho * span * strength).exp();
    if w < WEIGHT_FLOOR {
        log::debug!("edge weight {w:e} clamped to {WEIGHT_FLOOR:e}");
        return Ok(WEIGHT_FLOOR);
    }
    Ok(w)
}

/// Weight of a negative COI edge.
pub fn ncoi_edge_weight(strength: f64, cite_year: i32, params: &DecayParams) -> Result<f64, CoiError> {
    decayed_weight(strength, cite_year, params)
}

/// Weight of a negative suspected COI edge; same law as [`ncoi_edge_weight`].
pub fn nscoi_edge_weight(strength: f64, cite_year: i32, params: &DecayParams) -> Result<f64, CoiError> {
    decayed_weight(strength, cite_year, params)
}

/// Author pairs across the two papers with coauthorship history in scope,
/// including authors present on both papers.
fn coauthor_pairs(
    citing: PaperIdx,
    cited: PaperIdx,
    corpus: &Corpus,
    index: &CoauthorIndex,
    scope: &HistoryScope,
) -> Vec<(AuthorId, AuthorId)> {
    let mut out = Vec::new();
    for x in corpus.paper(citing).author_ids() {
        for y in corpus.paper(cited).author_ids() {
            if index.record_in(x, y, scope).is_some() {
                out.push((x, y));
            }
        }
    }
    out
}

/// Author pairs across the two papers whose mentions share an affiliation.
fn same_affiliation_pairs(citing: PaperIdx, cited: PaperIdx, corpus: &Corpus) -> Vec<(AuthorId, AuthorId)> {
    let mut out = Vec::new();
    for mx in &corpus.paper(citing).authors {
        for my in &corpus.paper(cited).authors {
            if mx.affiliations.iter().any(|a| my.affiliations.contains(a)) {
                out.push((mx.author, my.author));
            }
        }
    }
    out
}

struct Classified {
    edge: WeightedEdge,
    /// Author pairs responsible for the classification.
    pairs: Vec<(AuthorId, AuthorId)>,
}

fn classify_one(
    citing: PaperIdx,
    cited: PaperIdx,
    corpus: &Corpus,
    indices: &Indices,
    options: &ClassifyOptions,
) -> Result<Classified, CoiError> {
    let cite_year = corpus.paper(citing).year;
    let scope = options.scope(cite_year);

    let coi_pairs = coauthor_pairs(citing, cited, corpus, &indices.coauthors, &scope);
    if !coi_pairs.is_empty() {
        let independent = independent_cociters(citing, cited, IndependenceMode::Coi, indices, corpus);
        let edge = if independent > 0 {
            WeightedEdge { citing, cited, class: CoiClass::PositiveCoi, coi_strength: 0.0, weight: 1.0 }
        } else {
            let strength = paper_ncoi_strength(citing, cited, corpus, &indices.coauthors, &scope);
            let weight = ncoi_edge_weight(strength, cite_year, &options.decay)?;
            WeightedEdge { citing, cited, class: CoiClass::NegativeCoi, coi_strength: strength, weight }
        };
        return Ok(Classified { edge, pairs: coi_pairs });
    }

    let aff_pairs = same_affiliation_pairs(citing, cited, corpus);
    if !aff_pairs.is_empty() {
        let independent = independent_cociters(citing, cited, IndependenceMode::SuspectedCoi, indices, corpus);
        let edge = if independent > 0 {
            WeightedEdge {
                citing,
                cited,
                class: CoiClass::PositiveSuspectedCoi,
                coi_strength: 0.0,
                weight: 1.0,
            }
        } else {
            let strength = paper_nscoi_strength(citing, cited, corpus, &indices.author_cites, &scope);
            let weight = nscoi_edge_weight(strength, cite_year, &options.decay)?;
            WeightedEdge {
                citing,
                cited,
                class: CoiClass::NegativeSuspectedCoi,
                coi_strength: strength,
                weight,
            }
        };
        return Ok(Classified { edge, pairs: aff_pairs });
    }

    Ok(Classified {
        edge: WeightedEdge { citing, cited, class: CoiClass::Normal, coi_strength: 0.0, weight: 1.0 },
        pairs: Vec::new(),
    })
}

/// Classify a single citation edge.
pub fn classify_edge(
    citing: PaperIdx,
    cited: PaperIdx,
    corpus: &Corpus,
    indices: &Indices,
    options: &ClassifyOptions,
) -> Result<WeightedEdge, CoiError> {
    classify_one(citing, cited, corpus, indices, options).map(|c| c.edge)
}

/// Per-class tallies for a classified corpus.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CoiSummary {
    pub total_edges: usize,
    /// Edges per class.
    pub edges: BTreeMap<CoiClass, usize>,
    /// Distinct ordered (citing author, cited author) pairs per class.
    pub author_pairs: BTreeMap<CoiClass, usize>,
    /// Distinct citing papers per class.
    pub citing_papers: BTreeMap<CoiClass, usize>,
    /// Negative edges whose weight hit [`WEIGHT_FLOOR`].
    pub floored_edges: usize,
}

#[derive(Debug, Clone)]
pub struct Classification {
    /// Sorted by (citing id, cited id).
    pub edges: Vec<WeightedEdge>,
    pub summary: CoiSummary,
}

impl Classification {
    pub fn count(&self, class: CoiClass) -> usize {
        self.summary.edges.get(&class).copied().unwrap_or(0)
    }

    /// Write `citing,cited,class,coi_strength,weight` rows.
    pub fn write_csv<W: std::io::Write>(&self, corpus: &Corpus, out: W) -> csv::Result<()> {
        write_edges_csv(&self.edges, corpus, out)
    }
}

pub fn write_edges_csv<W: std::io::Write>(edges: &[WeightedEdge], corpus: &Corpus, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["citing", "cited", "class", "coi_strength", "weight"])?;
    for e in edges {
        w.write_record([
            corpus.paper(e.citing).id.as_str(),
            corpus.paper(e.cited).id.as_str(),
            e.class.as_str(),
            &e.coi_strength.to_string(),
            &e.weight.to_string(),
        ])?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Debug, thiserror::Error)]
pub enum EdgeFileError {
    #[error(transparent)]
    Csv(#[from] csv::Error),
    #[error("row {row}: {msg}")]
    Invalid { row: usize, msg: String },
    #[error("edge file lists {found} edges but the corpus has {expected}")]
    CountMismatch { found: usize, expected: usize },
}

#[derive(Deserialize)]
struct EdgeRow {
    citing: String,
    cited: String,
    class: String,
    coi_strength: f64,
    weight: f64,
}

/// Read an edge file written by [`write_edges_csv`] back against `corpus`.
/// Every corpus edge must appear exactly once.
pub fn read_edges_csv<R: std::io::Read>(corpus: &Corpus, input: R) -> Result<Vec<WeightedEdge>, EdgeFileError> {
    let known: BTreeSet<(PaperIdx, PaperIdx)> = corpus.edges().iter().copied().collect();
    let mut seen = BTreeSet::new();
    let mut edges = Vec::new();
    for (i, row) in csv::Reader::from_reader(input).deserialize::<EdgeRow>().enumerate() {
        let row = row?;
        let invalid = |msg: String| EdgeFileError::Invalid { row: i + 1, msg };
        let citing = corpus.lookup(&row.citing).ok_or_else(|| invalid(format!("unknown paper {:?}", row.citing)))?;
        let cited = corpus.lookup(&row.cited).ok_or_else(|| invalid(format!("unknown paper {:?}", row.cited)))?;
        if !known.contains(&(citing, cited)) || !seen.insert((citing, cited)) {
            return Err(invalid(format!("{} -> {} is not a distinct corpus edge", row.citing, row.cited)));
        }
        let class: CoiClass = row.class.parse().map_err(invalid)?;
        if !(row.weight > 0.0 && row.weight <= 1.0) {
            return Err(invalid(format!("weight {} outside (0, 1]", row.weight)));
        }
        edges.push(WeightedEdge { citing, cited, class, coi_strength: row.coi_strength, weight: row.weight });
    }
    if edges.len() != known.len() {
        return Err(EdgeFileError::CountMismatch { found: edges.len(), expected: known.len() });
    }
    Ok(edges)
}

/// Classify and weight every resolved edge of the corpus.
pub fn classify_corpus(
    corpus: &Corpus,
    indices: &Indices,
    options: &ClassifyOptions,
) -> Result<Classification, CoiError> {
    let results: Vec<Classified> = corpus
        .edges()
        .par_iter()
        .map(|&(citing, cited)| classify_one(citing, cited, corpus, indices, options))
        .collect::<Result<_, _>>()?;

    let mut summary = CoiSummary { total_edges: results.len(), ..Default::default() };
    let mut pair_sets: BTreeMap<CoiClass, BTreeSet<(AuthorId, AuthorId)>> = BTreeMap::new();
    let mut paper_sets: BTreeMap<CoiClass, BTreeSet<PaperIdx>> = BTreeMap::new();
    for class in CoiClass::ALL {
        summary.edges.insert(class, 0);
    }
    for r in &results {
        *summary.edges.entry(r.edge.class).or_default() += 1;
        paper_sets.entry(r.edge.class).or_default().insert(r.edge.citing);
        if r.edge.class.is_coi() {
            pair_sets.entry(r.edge.class).or_default().extend(r.pairs.iter().copied());
        }
        if r.edge.class.is_negative() && r.edge.weight <= WEIGHT_FLOOR {
            summary.floored_edges += 1;
        }
    }
    for class in CoiClass::ALL.into_iter().filter(|c| c.is_coi()) {
        summary.author_pairs.insert(class, pair_sets.get(&class).map_or(0, BTreeSet::len));
    }
    for class in CoiClass::ALL {
        summary.citing_papers.insert(class, paper_sets.get(&class).map_or(0, BTreeSet::len));
    }
    if summary.floored_edges > 0 {
        log::warn!("{} negative edge weight(s) hit the {WEIGHT_FLOOR:e} floor", summary.floored_edges);
    }

    let mut edges: Vec<WeightedEdge> = results.into_iter().map(|r| r.edge).collect();
    edges.sort_by(|a, b| {
        (corpus.paper(a.citing).id.as_str(), corpus.paper(a.cited).id.as_str())
            .cmp(&(corpus.paper(b.citing).id.as_str(), corpus.paper(b.cited).id.as_str()))
    });
    Ok(Classification { edges, summary })
}
