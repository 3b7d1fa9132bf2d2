//! Fixed-point paper ranking: a weighted PageRank term fused with author,
//! journal and reference hub terms, plus the two baseline rankers.
//!
//! One iteration computes, from the previous score vector `S`,
//!
//! ```text
//! wpr(i)       = Σ_{j→i} W(j,i) / |OUT(j)| · S(j)   (+ dangling mass / N)
//! author(i)    = Σ_{a ∈ authors(i)} hub(a) / T(A)
//! journal(i)   = hub(journal(i)) / T(J)
//! reference(i) = Σ_{j→i} hub(j) / T(P)
//! S'(i)        = α·wpr + β·author + γ·journal + δ·reference + (1-α-β-γ-δ)·jump(i)
//! ```
//!
//! with `hub(a)` the credit-weighted mean score of `a`'s papers, `hub(J)` the
//! mean score of a journal's papers, `hub(j)` the mean score of `j`'s
//! references, and `T(·)` the sum of the respective hub scores.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::coi::WeightedEdge;
use crate::corpus::Corpus;
use crate::credit::CreditTable;
use crate::ids::PaperIdx;

/// Upper bound on `α+β+γ+δ`; the rest is random-jump mass.
pub const MAX_COMPONENT_MASS: f64 = 0.85;
const MASS_TOLERANCE: f64 = 1e-9;

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RankError {
    #[error("{name} = {value} must lie in [0, 1]")]
    OutOfRange { name: &'static str, value: f64 },
    #[error("alpha+beta+gamma+delta = {0} exceeds 0.85")]
    MassTooLarge(f64),
    #[error("epsilon must be positive, got {0}")]
    BadEpsilon(f64),
    #[error("rho must be positive, got {0}")]
    BadRho(f64),
    #[error("max_iters must be at least 1")]
    NoIterations,
    #[error("edge list does not match the corpus ({0} papers)")]
    ForeignEdge(usize),
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct RankParams {
    pub alpha: f64,
    pub beta: f64,
    pub gamma: f64,
    pub delta: f64,
    /// Age decay used by the FutureRank personalization.
    pub rho: f64,
    pub epsilon: f64,
    pub max_iters: usize,
}

impl Default for RankParams {
    fn default() -> Self {
        Self {
            alpha: 0.4,
            beta: 0.15,
            gamma: 0.15,
            delta: 0.15,
            rho: crate::coi::DEFAULT_RHO,
            epsilon: 1e-4,
            max_iters: 200,
        }
    }
}

impl RankParams {
    pub fn with_mix(alpha: f64, beta: f64, gamma: f64, delta: f64) -> Self {
        Self { alpha, beta, gamma, delta, ..Self::default() }
    }

    pub fn component_mass(&self) -> f64 {
        self.alpha + self.beta + self.gamma + self.delta
    }

    pub fn jump_mass(&self) -> f64 {
        (1.0 - self.component_mass()).max(0.0)
    }

    pub fn validate(&self) -> Result<(), RankError> {
        for (name, value) in [
            ("alpha", self.alpha),
            ("beta", self.beta),
            ("gamma", self.gamma),
            ("delta", self.delta),
        ] {
            if !(0.0..=1.0).contains(&value) {
                return Err(RankError::OutOfRange { name, value });
            }
        }
        let mass = self.component_mass();
        if mass > MAX_COMPONENT_MASS + MASS_TOLERANCE {
            return Err(RankError::MassTooLarge(mass));
        }
        if !(self.epsilon.is_finite() && self.epsilon > 0.0) {
            return Err(RankError::BadEpsilon(self.epsilon));
        }
        if !(self.rho.is_finite() && self.rho > 0.0) {
            return Err(RankError::BadRho(self.rho));
        }
        if self.max_iters == 0 {
            return Err(RankError::NoIterations);
        }
        Ok(())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Algorithm {
    Pandora,
    CajtRank,
    FutureRank,
}

impl Algorithm {
    pub const ALL: [Algorithm; 3] = [Algorithm::Pandora, Algorithm::CajtRank, Algorithm::FutureRank];

    pub fn as_str(self) -> &'static str {
        match self {
            Algorithm::Pandora => "pandora",
            Algorithm::CajtRank => "cajtrank",
            Algorithm::FutureRank => "futurerank",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Algorithm {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Algorithm::ALL
            .into_iter()
            .find(|a| a.as_str() == s.to_ascii_lowercase())
            .ok_or_else(|| format!("unknown algorithm {s:?}"))
    }
}

/// Weighted in-links and out-degrees of the citation graph.
#[derive(Debug, Clone)]
pub struct CitationGraph {
    in_links: Vec<Vec<(PaperIdx, f64)>>,
    out_degree: Vec<usize>,
    dangling: Vec<PaperIdx>,
}

impl CitationGraph {
    pub fn from_weighted(corpus: &Corpus, edges: &[WeightedEdge]) -> Result<Self, RankError> {
        let n = corpus.len();
        let mut in_links = vec![Vec::new(); n];
        let mut out_degree = vec![0usize; n];
        for e in edges {
            if e.citing.index() >= n || e.cited.index() >= n {
                return Err(RankError::ForeignEdge(n));
            }
            in_links[e.cited.index()].push((e.citing, e.weight));
            out_degree[e.citing.index()] += 1;
        }
        for links in &mut in_links {
            links.sort_by_key(|(p, _)| *p);
        }
        Ok(Self::finish(in_links, out_degree))
    }

    /// Every resolved edge with weight 1.
    pub fn unweighted(corpus: &Corpus) -> Self {
        let n = corpus.len();
        let mut in_links = vec![Vec::new(); n];
        let mut out_degree = vec![0usize; n];
        for &(citing, cited) in corpus.edges() {
            in_links[cited.index()].push((citing, 1.0));
            out_degree[citing.index()] += 1;
        }
        for links in &mut in_links {
            links.sort_by_key(|(p, _)| *p);
        }
        Self::finish(in_links, out_degree)
    }

    fn finish(in_links: Vec<Vec<(PaperIdx, f64)>>, out_degree: Vec<usize>) -> Self {
        let dangling = out_degree
            .iter()
            .enumerate()
            .filter(|(_, &d)| d == 0)
            .map(|(i, _)| PaperIdx::from_index(i))
            .collect();
        Self { in_links, out_degree, dangling }
    }

    pub fn len(&self) -> usize {
        self.out_degree.len()
    }

    pub fn is_empty(&self) -> bool {
        self.out_degree.is_empty()
    }

    pub fn in_links(&self, p: PaperIdx) -> &[(PaperIdx, f64)] {
        &self.in_links[p.index()]
    }

    pub fn out_degree(&self, p: PaperIdx) -> usize {
        self.out_degree[p.index()]
    }
}

/// The four per-paper component vectors of one iteration.
#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct Components {
    pub wpr: Vec<f64>,
    pub author: Vec<f64>,
    pub journal: Vec<f64>,
    pub reference: Vec<f64>,
}

/// Weighted PageRank term. Papers without in-corpus references spread their
/// score uniformly.
pub fn weighted_pagerank_step(scores: &[f64], graph: &CitationGraph) -> Vec<f64> {
    let n = scores.len();
    if n == 0 {
        return Vec::new();
    }
    let dangling_share = graph.dangling.iter().map(|p| scores[p.index()]).sum::<f64>() / n as f64;
    (0..n)
        .into_par_iter()
        .map(|i| {
            graph.in_links[i]
                .iter()
                .map(|&(j, w)| w / graph.out_degree[j.index()] as f64 * scores[j.index()])
                .sum::<f64>()
                + dangling_share
        })
        .collect()
}

fn normalize_by_total(values: &mut [f64], total: f64) {
    if total > 0.0 {
        for v in values {
            *v /= total;
        }
    } else {
        values.iter_mut().for_each(|v| *v = 0.0);
    }
}

/// Author hub scores: credit-weighted mean score of each author's papers.
pub fn author_hubs(scores: &[f64], credit: &CreditTable, corpus: &Corpus) -> Vec<f64> {
    (0..corpus.author_count())
        .map(|a| {
            let a = crate::ids::AuthorId::from_index(a);
            let papers = corpus.papers_of_author(a);
            if papers.is_empty() {
                return 0.0;
            }
            let mass: f64 = papers.iter().map(|&p| credit.share(p, a) * scores[p.index()]).sum();
            mass / papers.len() as f64
        })
        .collect()
}

pub fn author_score_step(scores: &[f64], credit: &CreditTable, corpus: &Corpus) -> Vec<f64> {
    let hubs = author_hubs(scores, credit, corpus);
    let total: f64 = hubs.iter().sum();
    let mut out: Vec<f64> = corpus
        .papers()
        .par_iter()
        .map(|p| p.author_ids().map(|a| hubs[a.index()]).sum())
        .collect();
    normalize_by_total(&mut out, total);
    out
}

pub fn journal_score_step(scores: &[f64], corpus: &Corpus) -> Vec<f64> {
    let hubs: Vec<f64> = (0..corpus.journal_count())
        .map(|j| {
            let papers = corpus.papers_of_journal(crate::ids::JournalId::from_index(j));
            if papers.is_empty() {
                0.0
            } else {
                papers.iter().map(|p| scores[p.index()]).sum::<f64>() / papers.len() as f64
            }
        })
        .collect();
    let total: f64 = hubs.iter().sum();
    let mut out: Vec<f64> = corpus.papers().iter().map(|p| hubs[p.journal.index()]).collect();
    normalize_by_total(&mut out, total);
    out
}

pub fn reference_score_step(scores: &[f64], corpus: &Corpus) -> Vec<f64> {
    let hubs: Vec<f64> = corpus
        .paper_indices()
        .map(|j| {
            let refs = corpus.references_of(j);
            if refs.is_empty() {
                0.0
            } else {
                refs.iter().map(|r| scores[r.index()]).sum::<f64>() / refs.len() as f64
            }
        })
        .collect();
    let total: f64 = hubs.iter().sum();
    let mut out: Vec<f64> = corpus
        .paper_indices()
        .collect::<Vec<_>>()
        .into_par_iter()
        .map(|i| corpus.citers_of(i).iter().map(|j| hubs[j.index()]).sum())
        .collect();
    normalize_by_total(&mut out, total);
    out
}

/// Mix the components with the random-jump distribution `jump` (which sums
/// to one).
pub fn combine_scores(components: &Components, params: &RankParams, jump: &[f64]) -> Vec<f64> {
    let rest = params.jump_mass();
    (0..jump.len())
        .map(|i| {
            params.alpha * components.wpr[i]
                + params.beta * components.author[i]
                + params.gamma * components.journal[i]
                + params.delta * components.reference[i]
                + rest * jump[i]
        })
        .collect()
}

pub fn uniform_jump(n: usize) -> Vec<f64> {
    vec![1.0 / n as f64; n]
}

/// Jump distribution proportional to `exp(-rho · age)`, age measured from
/// `t_current`.
pub fn age_decay_jump(corpus: &Corpus, rho: f64, t_current: i32) -> Vec<f64> {
    let raw: Vec<f64> = corpus
        .papers()
        .iter()
        .map(|p| (-rho * f64::from(t_current - p.year).max(0.0)).exp())
        .collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|v| v / total).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankState {
    pub scores: Vec<f64>,
    pub components: Components,
    pub iterations: usize,
    /// Max per-paper score change of the last iteration.
    pub last_delta: f64,
    pub converged: bool,
    /// Max per-paper score change of every iteration.
    pub trace: Vec<f64>,
}

#[derive(Debug, Clone)]
pub struct RankOutcome {
    pub algorithm: Algorithm,
    pub state: RankState,
    /// Papers by descending score, ties by year then id.
    pub ranking: Vec<PaperIdx>,
}

impl RankOutcome {
    pub fn converged(&self) -> bool {
        self.state.converged
    }

    pub fn ranked_ids<'c>(&self, corpus: &'c Corpus) -> Vec<&'c str> {
        self.ranking.iter().map(|&p| corpus.paper(p).id.as_str()).collect()
    }

    /// Write `rank,paper_id,score,wpr,author,journal,reference` rows.
    pub fn write_csv<W: std::io::Write>(&self, corpus: &Corpus, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["rank", "paper_id", "score", "wpr", "author", "journal", "reference"])?;
        let s = &self.state;
        for (r, &p) in self.ranking.iter().enumerate() {
            let i = p.index();
            w.write_record([
                (r + 1).to_string(),
                corpus.paper(p).id.clone(),
                s.scores[i].to_string(),
                s.components.wpr[i].to_string(),
                s.components.author[i].to_string(),
                s.components.journal[i].to_string(),
                s.components.reference[i].to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }
}

/// Deterministic order: score descending, then earlier year, then id.
pub fn rank_order(corpus: &Corpus, scores: &[f64]) -> Vec<PaperIdx> {
    let mut order: Vec<PaperIdx> = corpus.paper_indices().collect();
    order.sort_by(|&a, &b| {
        scores[b.index()]
            .partial_cmp(&scores[a.index()])
            .unwrap_or(Ordering::Equal)
            .then_with(|| corpus.paper(a).year.cmp(&corpus.paper(b).year))
            .then_with(|| corpus.paper(a).id.cmp(&corpus.paper(b).id))
    });
    order
}

/// Iterate all four components and combine until the largest per-paper
/// change drops below `params.epsilon` or `params.max_iters` is reached.
pub fn run_to_convergence(
    corpus: &Corpus,
    graph: &CitationGraph,
    credit: &CreditTable,
    params: &RankParams,
    jump: &[f64],
) -> RankState {
    let n = corpus.len();
    let mut scores = uniform_jump(n);
    let mut state = RankState {
        scores: scores.clone(),
        components: Components::default(),
        iterations: 0,
        last_delta: f64::INFINITY,
        converged: n == 0,
        trace: Vec::new(),
    };
    if n == 0 {
        state.last_delta = 0.0;
        return state;
    }
    for it in 1..=params.max_iters {
        let components = Components {
            wpr: if params.alpha > 0.0 { weighted_pagerank_step(&scores, graph) } else { vec![0.0; n] },
            author: if params.beta > 0.0 { author_score_step(&scores, credit, corpus) } else { vec![0.0; n] },
            journal: if params.gamma > 0.0 { journal_score_step(&scores, corpus) } else { vec![0.0; n] },
            reference: if params.delta > 0.0 { reference_score_step(&scores, corpus) } else { vec![0.0; n] },
        };
        let next = combine_scores(&components, params, jump);
        let delta = next
            .iter()
            .zip(&scores)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        scores = next;
        state.iterations = it;
        state.last_delta = delta;
        state.trace.push(delta);
        state.components = components;
        if delta < params.epsilon {
            state.converged = true;
            break;
        }
    }
    if !state.converged {
        log::warn!(
            "ranking did not converge after {} iterations (last delta {:e})",
            state.iterations,
            state.last_delta
        );
    }
    state.scores = scores;
    state
}

fn outcome(algorithm: Algorithm, corpus: &Corpus, state: RankState) -> RankOutcome {
    let ranking = rank_order(corpus, &state.scores);
    RankOutcome { algorithm, state, ranking }
}

/// COI-weighted ranking.
pub fn pandora(
    corpus: &Corpus,
    edges: &[WeightedEdge],
    credit: &CreditTable,
    params: &RankParams,
) -> Result<RankOutcome, RankError> {
    params.validate()?;
    let graph = CitationGraph::from_weighted(corpus, edges)?;
    let state = run_to_convergence(corpus, &graph, credit, params, &uniform_jump(corpus.len()));
    Ok(outcome(Algorithm::Pandora, corpus, state))
}

/// Same iteration with every citation weighted 1. Without a credit table,
/// authors share each paper equally.
pub fn cajtrank(
    corpus: &Corpus,
    credit: Option<&CreditTable>,
    params: &RankParams,
) -> Result<RankOutcome, RankError> {
    params.validate()?;
    let graph = CitationGraph::unweighted(corpus);
    let uniform;
    let credit = match credit {
        Some(c) => c,
        None => {
            uniform = CreditTable::uniform(corpus);
            &uniform
        }
    };
    let state = run_to_convergence(corpus, &graph, credit, params, &uniform_jump(corpus.len()));
    Ok(outcome(Algorithm::CajtRank, corpus, state))
}

/// Unit weights, no journal term, and an age-decayed random jump.
pub fn futurerank(
    corpus: &Corpus,
    credit: Option<&CreditTable>,
    params: &RankParams,
    t_current: i32,
) -> Result<RankOutcome, RankError> {
    params.validate()?;
    let params = RankParams { gamma: 0.0, ..*params };
    let graph = CitationGraph::unweighted(corpus);
    let uniform;
    let credit = match credit {
        Some(c) => c,
        None => {
            uniform = CreditTable::uniform(corpus);
            &uniform
        }
    };
    let jump = age_decay_jump(corpus, params.rho, t_current);
    let state = run_to_convergence(corpus, &graph, credit, &params, &jump);
    Ok(outcome(Algorithm::FutureRank, corpus, state))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::{IngestOptions, RawAuthor, RawPaper};
    use crate::credit::CreditScheme;

    fn corpus(recs: Vec<RawPaper>) -> Corpus {
        Corpus::from_records(recs, &IngestOptions { max_year: Some(2030), ..Default::default() })
            .unwrap()
            .corpus
    }

    fn solo(name: &str) -> Vec<RawAuthor> {
        vec![RawAuthor::new(name, &[], None)]
    }

    fn two_cycle() -> Corpus {
        corpus(vec![
            RawPaper::new("a", 2000, "J", solo("A Aa"), &["b"]),
            RawPaper::new("b", 2000, "J", solo("B Bb"), &["a"]),
        ])
    }

    #[test]
    fn params_validation() {
        assert!(RankParams::default().validate().is_ok());
        assert!(RankParams::with_mix(0.85, 0.0, 0.0, 0.0).validate().is_ok());
        assert_eq!(
            RankParams::with_mix(0.5, 0.2, 0.2, 0.1).validate(),
            Err(RankError::MassTooLarge(0.5 + 0.2 + 0.2 + 0.1))
        );
        assert!(matches!(
            RankParams::with_mix(-0.1, 0.0, 0.0, 0.0).validate(),
            Err(RankError::OutOfRange { name: "alpha", .. })
        ));
        assert!(RankParams { epsilon: 0.0, ..Default::default() }.validate().is_err());
        assert!(RankParams { max_iters: 0, ..Default::default() }.validate().is_err());
    }

    #[test]
    fn mutual_pair_is_a_fixed_point() {
        let c = two_cycle();
        let g = CitationGraph::unweighted(&c);
        assert_eq!(weighted_pagerank_step(&[0.5, 0.5], &g), vec![0.5, 0.5]);
    }

    #[test]
    fn single_edge_contribution() {
        // b cites a with weight w; a is dangling and spreads s_a / 2 to both.
        let c = corpus(vec![
            RawPaper::new("a", 2000, "J", solo("A Aa"), &[]),
            RawPaper::new("b", 2001, "J", solo("B Bb"), &["a"]),
        ]);
        let w = 0.3;
        let edges = vec![WeightedEdge {
            citing: PaperIdx(1),
            cited: PaperIdx(0),
            class: crate::coi::CoiClass::NegativeCoi,
            coi_strength: 1.0,
            weight: w,
        }];
        let g = CitationGraph::from_weighted(&c, &edges).unwrap();
        let (sa, sb) = (0.2, 0.7);
        let out = weighted_pagerank_step(&[sa, sb], &g);
        assert!((out[0] - (w * sb + sa / 2.0)).abs() < 1e-15);
        assert!((out[1] - sa / 2.0).abs() < 1e-15);
    }

    #[test]
    fn author_single_paper() {
        let c = corpus(vec![RawPaper::new("a", 2000, "J", solo("A Aa"), &[])]);
        let credit = CreditTable::build(&c, CreditScheme::Collective);
        assert_eq!(author_score_step(&[0.37], &credit, &c), vec![1.0]);
    }

    #[test]
    fn author_hub_is_mean_of_papers() {
        let c = corpus(vec![
            RawPaper::new("a", 2000, "J", solo("A Aa"), &[]),
            RawPaper::new("b", 2000, "J", solo("A Aa"), &[]),
        ]);
        let credit = CreditTable::build(&c, CreditScheme::Collective);
        let hubs = author_hubs(&[0.2, 0.6], &credit, &c);
        assert!((hubs[0] - 0.4).abs() < 1e-15);
        // One author: every paper receives the whole normalized hub mass.
        assert_eq!(author_score_step(&[0.2, 0.6], &credit, &c), vec![1.0, 1.0]);
    }

    #[test]
    fn journal_single_and_mean() {
        let c = corpus(vec![
            RawPaper::new("a", 2000, "J", solo("A Aa"), &[]),
            RawPaper::new("b", 2000, "J", solo("B Bb"), &[]),
            RawPaper::new("c", 2000, "K", solo("C Cc"), &[]),
        ]);
        // hub(J) = (0.2 + 0.4)/2 = 0.3, hub(K) = 0.6, T(J) = 0.9.
        let out = journal_score_step(&[0.2, 0.4, 0.6], &c);
        assert!((out[0] - 0.3 / 0.9).abs() < 1e-15);
        assert!((out[1] - 0.3 / 0.9).abs() < 1e-15);
        assert!((out[2] - 0.6 / 0.9).abs() < 1e-15);

        let one = corpus(vec![RawPaper::new("a", 2000, "J", solo("A Aa"), &[])]);
        assert_eq!(journal_score_step(&[0.5], &one), vec![1.0]);
    }

    #[test]
    fn reference_single_citer() {
        let c = corpus(vec![
            RawPaper::new("a", 2000, "J", solo("A Aa"), &[]),
            RawPaper::new("b", 2001, "J", solo("B Bb"), &["a"]),
        ]);
        // Only b is a hub; a receives all of it, b is uncited.
        assert_eq!(reference_score_step(&[0.3, 0.7], &c), vec![1.0, 0.0]);
    }

    #[test]
    fn pure_jump() {
        let c = two_cycle();
        let comps = Components {
            wpr: vec![0.9, 0.1],
            author: vec![0.3, 0.3],
            journal: vec![1.0, 0.0],
            reference: vec![0.2, 0.8],
        };
        let out = combine_scores(&comps, &RankParams::with_mix(0.0, 0.0, 0.0, 0.0), &uniform_jump(2));
        assert_eq!(out, vec![0.5, 0.5]);
        let out = combine_scores(&comps, &RankParams::with_mix(0.85, 0.0, 0.0, 0.0), &uniform_jump(2));
        assert!((out[0] - (0.85 * 0.9 + 0.15 / 2.0)).abs() < 1e-15);
        let _ = c;
    }

    #[test]
    fn symmetric_cycle_converges_to_uniform() {
        let c = two_cycle();
        let credit = CreditTable::uniform(&c);
        let out = cajtrank(&c, Some(&credit), &RankParams::with_mix(0.85, 0.0, 0.0, 0.0)).unwrap();
        assert!(out.converged());
        assert!(out.state.iterations <= 2);
        assert_eq!(out.state.scores, vec![0.5, 0.5]);
    }

    #[test]
    fn non_convergence_is_reported() {
        let c = corpus(vec![
            RawPaper::new("a", 2000, "J", solo("A Aa"), &[]),
            RawPaper::new("b", 2001, "J", solo("B Bb"), &["a"]),
            RawPaper::new("c", 2002, "K", solo("C Cc"), &["a", "b"]),
        ]);
        let params = RankParams { max_iters: 1, epsilon: 1e-300, ..Default::default() };
        let out = cajtrank(&c, None, &params).unwrap();
        assert!(!out.converged());
        assert_eq!(out.state.iterations, 1);
    }

    #[test]
    fn ties_break_by_year_then_id() {
        let c = corpus(vec![
            RawPaper::new("z", 2001, "J", solo("A Aa"), &[]),
            RawPaper::new("y", 2000, "J", solo("B Bb"), &[]),
            RawPaper::new("x", 2001, "J", solo("C Cc"), &[]),
        ]);
        let order = rank_order(&c, &[0.1, 0.1, 0.1]);
        let ids: Vec<&str> = order.iter().map(|&p| c.paper(p).id.as_str()).collect();
        assert_eq!(ids, vec!["y", "x", "z"]);
    }

    #[test]
    fn algorithm_parse() {
        for a in Algorithm::ALL {
            assert_eq!(a.as_str().parse::<Algorithm>().unwrap(), a);
        }
        assert!("hits".parse::<Algorithm>().is_err());
    }

    #[test]
    fn empty_corpus_ranks_trivially() {
        let c = Corpus::default();
        let out = cajtrank(&c, None, &RankParams::default()).unwrap();
        assert!(out.converged());
        assert!(out.ranking.is_empty());
    }
}
