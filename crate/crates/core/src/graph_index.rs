//! Derived lookup structures: coauthorship history, author-to-author citation
//! history, co-citation lists and affiliation membership.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::io::Write;

use crate::corpus::Corpus;
use crate::ids::{AuthorId, InstId, PaperIdx};

/// Which part of a pair's history counts when a citation is examined.
///
/// `upto` caps event years (inclusive); `window` further restricts to the
/// trailing `window` years ending at `upto`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct HistoryScope {
    pub upto: Option<i32>,
    pub window: Option<u32>,
}

impl HistoryScope {
    pub const ALL: HistoryScope = HistoryScope { upto: None, window: None };

    /// History known at the time of a citation made in `year`.
    pub fn as_of(year: i32, window: Option<u32>) -> Self {
        Self { upto: Some(year), window }
    }

    fn admits(&self, year: i32) -> bool {
        match self.upto {
            None => true,
            Some(upto) => {
                year <= upto
                    && match self.window {
                        Some(w) => i64::from(year) > i64::from(upto) - i64::from(w),
                        None => true,
                    }
            }
        }
    }
}

/// Aggregate of a pair's events: how many, and the first and last year.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairRecord {
    pub count: usize,
    pub first_year: i32,
    pub last_year: i32,
}

impl PairRecord {
    /// Inclusive span in years.
    pub fn span(&self) -> i32 {
        self.last_year - self.first_year + 1
    }

    /// Events per year of history: `count / span`.
    pub fn rate(&self) -> f64 {
        self.count as f64 / f64::from(self.span())
    }
}

/// Sorted event years of one pair; one entry per contributing paper.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
struct YearLog(Vec<i32>);

impl YearLog {
    fn record(&self, scope: &HistoryScope) -> Option<PairRecord> {
        let mut it = self.0.iter().copied().filter(|y| scope.admits(*y));
        let first = it.next()?;
        let (count, last) = it.fold((1, first), |(n, _), y| (n + 1, y));
        Some(PairRecord { count, first_year: first, last_year: last })
    }
}

fn unordered(a: AuthorId, b: AuthorId) -> (AuthorId, AuthorId) {
    if a <= b { (a, b) } else { (b, a) }
}

/// Papers coauthored by each unordered author pair.
#[derive(Debug, Clone, Default)]
pub struct CoauthorIndex {
    pairs: HashMap<(AuthorId, AuthorId), YearLog>,
    /// Publication years per author; backs the diagonal `(x, x)` lookups.
    own: Vec<YearLog>,
}

impl CoauthorIndex {
    pub fn build(corpus: &Corpus) -> Self {
        let mut pairs: HashMap<(AuthorId, AuthorId), YearLog> = HashMap::new();
        let mut own = vec![YearLog::default(); corpus.author_count()];
        for paper in corpus.papers() {
            let ids: Vec<AuthorId> = paper.author_ids().collect();
            for (i, &x) in ids.iter().enumerate() {
                own[x.index()].0.push(paper.year);
                for &y in &ids[i + 1..] {
                    pairs.entry(unordered(x, y)).or_default().0.push(paper.year);
                }
            }
        }
        for log in pairs.values_mut().chain(own.iter_mut()) {
            log.0.sort_unstable();
        }
        Self { pairs, own }
    }

    /// Coauthorship record of `x` and `y` within `scope`. For `x == y` this is
    /// the author's own publication record (`|S_x ∩ S_x| = |S_x|`).
    pub fn record_in(&self, x: AuthorId, y: AuthorId, scope: &HistoryScope) -> Option<PairRecord> {
        if x == y {
            return self.own.get(x.index()).and_then(|l| l.record(scope));
        }
        self.pairs.get(&unordered(x, y)).and_then(|l| l.record(scope))
    }

    pub fn record(&self, x: AuthorId, y: AuthorId) -> Option<PairRecord> {
        self.record_in(x, y, &HistoryScope::ALL)
    }

    /// Distinct-author pairs with at least one joint paper, sorted.
    pub fn pairs(&self) -> Vec<((AuthorId, AuthorId), PairRecord)> {
        let mut out: Vec<_> = self
            .pairs
            .iter()
            .filter_map(|(&k, log)| log.record(&HistoryScope::ALL).map(|r| (k, r)))
            .collect();
        out.sort_unstable_by_key(|(k, _)| *k);
        out
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// For ordered author pairs `(x, y)`, the papers by `x` citing at least one
/// paper by `y`. Only distinct authors are stored.
#[derive(Debug, Clone, Default)]
pub struct AuthorCiteIndex {
    pairs: HashMap<(AuthorId, AuthorId), YearLog>,
}

impl AuthorCiteIndex {
    pub fn build(corpus: &Corpus) -> Self {
        let mut papers: HashMap<(AuthorId, AuthorId), BTreeSet<PaperIdx>> = HashMap::new();
        for &(citing, cited) in corpus.edges() {
            let cited_authors: Vec<AuthorId> = corpus.paper(cited).author_ids().collect();
            for x in corpus.paper(citing).author_ids() {
                for &y in &cited_authors {
                    if x != y {
                        papers.entry((x, y)).or_default().insert(citing);
                    }
                }
            }
        }
        let pairs = papers
            .into_iter()
            .map(|(k, set)| {
                let mut years: Vec<i32> = set.into_iter().map(|p| corpus.paper(p).year).collect();
                years.sort_unstable();
                (k, YearLog(years))
            })
            .collect();
        Self { pairs }
    }

    pub fn record_in(&self, x: AuthorId, y: AuthorId, scope: &HistoryScope) -> Option<PairRecord> {
        self.pairs.get(&(x, y)).and_then(|l| l.record(scope))
    }

    pub fn record(&self, x: AuthorId, y: AuthorId) -> Option<PairRecord> {
        self.record_in(x, y, &HistoryScope::ALL)
    }

    pub fn pairs(&self) -> Vec<((AuthorId, AuthorId), PairRecord)> {
        let mut out: Vec<_> = self
            .pairs
            .iter()
            .filter_map(|(&k, log)| log.record(&HistoryScope::ALL).map(|r| (k, r)))
            .collect();
        out.sort_unstable_by_key(|(k, _)| *k);
        out
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Co-citing papers for every unordered pair of papers cited together.
#[derive(Debug, Clone, Default)]
pub struct CoCitationIndex {
    pairs: HashMap<(PaperIdx, PaperIdx), Vec<PaperIdx>>,
}

impl CoCitationIndex {
    pub fn build(corpus: &Corpus) -> Self {
        let mut pairs: HashMap<(PaperIdx, PaperIdx), Vec<PaperIdx>> = HashMap::new();
        for citer in corpus.paper_indices() {
            let mut refs = corpus.references_of(citer).to_vec();
            refs.sort_unstable();
            for (a, &i) in refs.iter().enumerate() {
                for &j in &refs[a + 1..] {
                    pairs.entry((i, j)).or_default().push(citer);
                }
            }
        }
        Self { pairs }
    }

    /// Papers whose reference lists contain both `i` and `j`, ascending.
    pub fn lookup(&self, i: PaperIdx, j: PaperIdx) -> &[PaperIdx] {
        let key = if i <= j { (i, j) } else { (j, i) };
        self.pairs.get(&key).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn pairs(&self) -> Vec<((PaperIdx, PaperIdx), &[PaperIdx])> {
        let mut out: Vec<_> = self.pairs.iter().map(|(&k, v)| (k, v.as_slice())).collect();
        out.sort_unstable_by_key(|(k, _)| *k);
        out
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }
}

/// Institution membership derived from author mentions.
#[derive(Debug, Clone, Default)]
pub struct AffiliationIndex {
    /// Authors listing the institution on at least one paper (any position).
    pub members: Vec<BTreeSet<AuthorId>>,
    /// Papers on which at least one author lists the institution.
    pub papers: Vec<BTreeSet<PaperIdx>>,
    /// Per paper, the union of all its mentions' affiliations.
    pub paper_affiliations: Vec<BTreeSet<InstId>>,
}

impl AffiliationIndex {
    pub fn build(corpus: &Corpus) -> Self {
        let n_inst = corpus.institutions().len();
        let mut members = vec![BTreeSet::new(); n_inst];
        let mut papers = vec![BTreeSet::new(); n_inst];
        let mut paper_affiliations = Vec::with_capacity(corpus.len());
        for p in corpus.paper_indices() {
            let mut set = BTreeSet::new();
            for m in &corpus.paper(p).authors {
                for &inst in &m.affiliations {
                    members[inst.index()].insert(m.author);
                    papers[inst.index()].insert(p);
                    set.insert(inst);
                }
            }
            paper_affiliations.push(set);
        }
        Self { members, papers, paper_affiliations }
    }

    /// Affiliations attached to `author`'s mention on `paper`.
    pub fn affiliations_on(corpus: &Corpus, author: AuthorId, paper: PaperIdx) -> &[InstId] {
        corpus
            .paper(paper)
            .authors
            .iter()
            .find(|m| m.author == author)
            .map(|m| m.affiliations.as_slice())
            .unwrap_or(&[])
    }
}

/// All derived indices for one corpus.
#[derive(Debug, Clone, Default)]
pub struct Indices {
    pub coauthors: CoauthorIndex,
    pub author_cites: AuthorCiteIndex,
    pub cocitations: CoCitationIndex,
    pub affiliations: AffiliationIndex,
}

pub fn build_indices(corpus: &Corpus) -> Indices {
    let ((coauthors, author_cites), (cocitations, affiliations)) = rayon::join(
        || rayon::join(|| CoauthorIndex::build(corpus), || AuthorCiteIndex::build(corpus)),
        || rayon::join(|| CoCitationIndex::build(corpus), || AffiliationIndex::build(corpus)),
    );
    Indices { coauthors, author_cites, cocitations, affiliations }
}

/// Independence test used when counting co-citers.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum IndependenceMode {
    /// Co-citer shares no author with either endpoint.
    Coi,
    /// Co-citer has no affiliation in common with either endpoint.
    SuspectedCoi,
}

/// Count co-citers of `(i, j)` that are independent of both papers.
pub fn independent_cociters(
    i: PaperIdx,
    j: PaperIdx,
    mode: IndependenceMode,
    indices: &Indices,
    corpus: &Corpus,
) -> usize {
    debug_assert_ne!(i, j);
    let cociters = indices.cocitations.lookup(i, j);
    match mode {
        IndependenceMode::Coi => {
            let endpoint: BTreeSet<AuthorId> =
                corpus.paper(i).author_ids().chain(corpus.paper(j).author_ids()).collect();
            cociters
                .iter()
                .filter(|&&c| corpus.paper(c).author_ids().all(|a| !endpoint.contains(&a)))
                .count()
        }
        IndependenceMode::SuspectedCoi => {
            let aff = &indices.affiliations.paper_affiliations;
            let endpoint: BTreeSet<InstId> = aff[i.index()].union(&aff[j.index()]).copied().collect();
            cociters
                .iter()
                .filter(|&&c| aff[c.index()].is_disjoint(&endpoint))
                .count()
        }
    }
}

/// Write every index entry as CSV rows:
/// `kind,a,b,count,first_year,last_year,cociters`.
pub fn dump_indices<W: Write>(indices: &Indices, corpus: &Corpus, out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["kind", "a", "b", "count", "first_year", "last_year", "cociters"])?;
    for ((x, y), r) in indices.coauthors.pairs() {
        w.write_record([
            "coauthor",
            corpus.author_key(x),
            corpus.author_key(y),
            &r.count.to_string(),
            &r.first_year.to_string(),
            &r.last_year.to_string(),
            "",
        ])?;
    }
    for ((x, y), r) in indices.author_cites.pairs() {
        w.write_record([
            "author_cite",
            corpus.author_key(x),
            corpus.author_key(y),
            &r.count.to_string(),
            &r.first_year.to_string(),
            &r.last_year.to_string(),
            "",
        ])?;
    }
    for ((i, j), cociters) in indices.cocitations.pairs() {
        let ids: BTreeMap<&str, ()> = cociters.iter().map(|&c| (corpus.paper(c).id.as_str(), ())).collect();
        let joined = ids.keys().copied().collect::<Vec<_>>().join(";");
        w.write_record([
            "cocitation",
            &corpus.paper(i).id,
            &corpus.paper(j).id,
            &cociters.len().to_string(),
            "",
            "",
            &joined,
        ])?;
    }
    w.flush()?;
    Ok(())
}
