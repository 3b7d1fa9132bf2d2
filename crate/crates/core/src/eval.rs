//! Ranking evaluation against a COI-free citation-count ground truth:
//! recommendation intensity (RI@k), Spearman's rank correlation at k, the
//! three-way algorithm comparison and the parameter grid search.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::hash::Hash;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::coi::{CoiClass, DecayParams, WeightedEdge};
use crate::corpus::Corpus;
use crate::credit::CreditTable;
use crate::ids::PaperIdx;
use crate::rank::{self, Algorithm, RankError, RankOutcome, RankParams};

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum EvalError {
    #[error("k = {k} exceeds list length {len}")]
    KTooLarge { k: usize, len: usize },
    #[error("k must be at least 1")]
    ZeroK,
    #[error(transparent)]
    Rank(#[from] RankError),
}

/// Papers ordered by NORMAL-class citation count, ties by year then id.
#[derive(Debug, Clone, PartialEq)]
pub struct GroundTruth {
    pub ranking: Vec<PaperIdx>,
    /// NORMAL in-citations per paper, indexed by [`PaperIdx`].
    pub counts: Vec<usize>,
}

pub fn build_ground_truth(edges: &[WeightedEdge], corpus: &Corpus) -> GroundTruth {
    let mut counts = vec![0usize; corpus.len()];
    for e in edges.iter().filter(|e| e.class == CoiClass::Normal) {
        counts[e.cited.index()] += 1;
    }
    let mut ranking: Vec<PaperIdx> = corpus.paper_indices().collect();
    ranking.sort_by(|&a, &b| {
        counts[b.index()]
            .cmp(&counts[a.index()])
            .then_with(|| corpus.paper(a).year.cmp(&corpus.paper(b).year))
            .then_with(|| corpus.paper(a).id.cmp(&corpus.paper(b).id))
    });
    GroundTruth { ranking, counts }
}

/// RI of one paper at 1-based position `ro` of the top-k list.
pub fn ri_of_position(ro: usize, k: usize) -> f64 {
    1.0 + (k as f64 - ro as f64) / k as f64
}

/// Largest attainable list RI at `k`: `Σ_{ro=1..k} (1 + (k-ro)/k)`.
pub fn ri_max(k: usize) -> f64 {
    (1..=k).map(|ro| ri_of_position(ro, k)).sum()
}

fn check_k(k: usize, lens: &[usize]) -> Result<(), EvalError> {
    if k == 0 {
        return Err(EvalError::ZeroK);
    }
    for &len in lens {
        if k > len {
            return Err(EvalError::KTooLarge { k, len });
        }
    }
    Ok(())
}

/// Sum of per-paper RI over the top-k of `ranked`, optionally divided by
/// [`ri_max`].
pub fn ri_at_k<T: Eq + Hash>(ranked: &[T], truth: &[T], k: usize, normalized: bool) -> Result<f64, EvalError> {
    check_k(k, &[ranked.len(), truth.len()])?;
    let relevant: HashSet<&T> = truth[..k].iter().collect();
    let total: f64 = ranked[..k]
        .iter()
        .enumerate()
        .filter(|(_, p)| relevant.contains(p))
        .map(|(i, _)| ri_of_position(i + 1, k))
        .fold(0.0, |acc, r| acc + r);
    Ok(if normalized { total / ri_max(k) } else { total })
}

/// Which papers enter the rank correlation at k.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum SpearmanDomain {
    /// Union of both top-k sets; a paper missing from one top-k is ranked
    /// `|union| + 1` there.
    #[default]
    Union,
    /// Papers in both top-k sets, at their top-k positions.
    Intersection,
    /// Union of both top-k sets, at their positions in the full lists.
    Full,
}

impl fmt::Display for SpearmanDomain {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SpearmanDomain::Union => "union",
            SpearmanDomain::Intersection => "intersection",
            SpearmanDomain::Full => "full",
        })
    }
}

impl FromStr for SpearmanDomain {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "union" => Ok(SpearmanDomain::Union),
            "intersection" => Ok(SpearmanDomain::Intersection),
            "full" => Ok(SpearmanDomain::Full),
            other => Err(format!("unknown Spearman domain {other:?}")),
        }
    }
}

/// Pearson correlation; `None` when either side has zero variance.
pub fn pearson(xs: &[f64], ys: &[f64]) -> Option<f64> {
    assert_eq!(xs.len(), ys.len());
    let n = xs.len();
    if n < 2 {
        return None;
    }
    let mx = xs.iter().sum::<f64>() / n as f64;
    let my = ys.iter().sum::<f64>() / n as f64;
    let (mut sxy, mut sxx, mut syy) = (0.0, 0.0, 0.0);
    for (x, y) in xs.iter().zip(ys) {
        let (dx, dy) = (x - mx, y - my);
        sxy += dx * dy;
        sxx += dx * dx;
        syy += dy * dy;
    }
    if sxx == 0.0 || syy == 0.0 {
        return None;
    }
    Some((sxy / (sxx * syy).sqrt()).clamp(-1.0, 1.0))
}

/// Spearman's rank correlation between the top-k of `ranked` and of `truth`.
/// Degenerate inputs (constant ranks) yield 0.
pub fn spearman_at_k<T: Eq + Hash + Clone>(
    ranked: &[T],
    truth: &[T],
    k: usize,
    domain: SpearmanDomain,
) -> Result<f64, EvalError> {
    check_k(k, &[ranked.len(), truth.len()])?;
    let top_r: HashMap<&T, usize> = ranked[..k].iter().enumerate().map(|(i, p)| (p, i + 1)).collect();
    let top_t: HashMap<&T, usize> = truth[..k].iter().enumerate().map(|(i, p)| (p, i + 1)).collect();

    let mut union: Vec<&T> = ranked[..k].iter().collect();
    union.extend(truth[..k].iter().filter(|p| !top_r.contains_key(p)));

    let (xs, ys): (Vec<f64>, Vec<f64>) = match domain {
        SpearmanDomain::Union => {
            let absent = (union.len() + 1) as f64;
            union
                .iter()
                .map(|p| {
                    let r = top_r.get(p).map_or(absent, |&v| v as f64);
                    let t = top_t.get(p).map_or(absent, |&v| v as f64);
                    (t, r)
                })
                .unzip()
        }
        SpearmanDomain::Intersection => ranked[..k]
            .iter()
            .filter_map(|p| top_t.get(p).map(|&t| (t as f64, top_r[p] as f64)))
            .unzip(),
        SpearmanDomain::Full => {
            let full_r: HashMap<&T, usize> = ranked.iter().enumerate().map(|(i, p)| (p, i + 1)).collect();
            let full_t: HashMap<&T, usize> = truth.iter().enumerate().map(|(i, p)| (p, i + 1)).collect();
            union
                .iter()
                .map(|p| {
                    let r = full_r.get(p).copied().unwrap_or(ranked.len() + 1) as f64;
                    let t = full_t.get(p).copied().unwrap_or(truth.len() + 1) as f64;
                    (t, r)
                })
                .unzip()
        }
    };
    match pearson(&xs, &ys) {
        Some(rho) => Ok(rho),
        None => {
            log::warn!("rank correlation at k={k} is degenerate; reporting 0");
            Ok(0.0)
        }
    }
}

/// `k_min, k_min + step, …, ≤ k_max`.
pub fn k_grid(k_min: usize, k_max: usize, step: usize) -> Vec<usize> {
    (k_min..=k_max).step_by(step.max(1)).collect()
}

/// Credit table handed to the two baselines.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum BaselineCredit {
    /// Same shares as the COI-weighted ranker, isolating the edge weighting.
    #[default]
    Shared,
    /// Equal split among coauthors.
    Uniform,
}

impl fmt::Display for BaselineCredit {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BaselineCredit::Shared => "shared",
            BaselineCredit::Uniform => "uniform",
        })
    }
}

impl FromStr for BaselineCredit {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "shared" => Ok(BaselineCredit::Shared),
            "uniform" => Ok(BaselineCredit::Uniform),
            other => Err(format!("unknown baseline credit mode {other:?}")),
        }
    }
}

/// Mixing parameters per algorithm.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AlgorithmParams {
    pub pandora: RankParams,
    pub cajtrank: RankParams,
    pub futurerank: RankParams,
}

impl AlgorithmParams {
    pub fn same(params: RankParams) -> Self {
        Self { pandora: params, cajtrank: params, futurerank: params }
    }

    pub fn get(&self, algo: Algorithm) -> &RankParams {
        match algo {
            Algorithm::Pandora => &self.pandora,
            Algorithm::CajtRank => &self.cajtrank,
            Algorithm::FutureRank => &self.futurerank,
        }
    }

    pub fn set(&mut self, algo: Algorithm, params: RankParams) {
        match algo {
            Algorithm::Pandora => self.pandora = params,
            Algorithm::CajtRank => self.cajtrank = params,
            Algorithm::FutureRank => self.futurerank = params,
        }
    }
}

/// Run one ranker on a classified corpus.
pub fn run_algorithm(
    algo: Algorithm,
    corpus: &Corpus,
    edges: &[WeightedEdge],
    credit: &CreditTable,
    params: &RankParams,
    decay: &DecayParams,
    baseline_credit: BaselineCredit,
) -> Result<RankOutcome, RankError> {
    let shared = match baseline_credit {
        BaselineCredit::Shared => Some(credit),
        BaselineCredit::Uniform => None,
    };
    match algo {
        Algorithm::Pandora => rank::pandora(corpus, edges, credit, params),
        Algorithm::CajtRank => rank::cajtrank(corpus, shared, params),
        Algorithm::FutureRank => rank::futurerank(corpus, shared, params, decay.t_current),
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvalOptions {
    pub k_values: Vec<usize>,
    pub ri_normalized: bool,
    pub spearman_domain: SpearmanDomain,
    pub baseline_credit: BaselineCredit,
}

impl Default for EvalOptions {
    fn default() -> Self {
        Self {
            k_values: k_grid(10, 300, 10),
            ri_normalized: true,
            spearman_domain: SpearmanDomain::Union,
            baseline_credit: BaselineCredit::Shared,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalRow {
    pub k: usize,
    pub algo: Algorithm,
    pub ri: f64,
    pub spearman: f64,
}

#[derive(Debug, Clone)]
pub struct Comparison {
    pub ground_truth: GroundTruth,
    pub outcomes: Vec<RankOutcome>,
    pub rows: Vec<EvalRow>,
    /// Requested k values dropped because they exceed the corpus size.
    pub skipped_k: Vec<usize>,
}

impl Comparison {
    pub fn row(&self, k: usize, algo: Algorithm) -> Option<&EvalRow> {
        self.rows.iter().find(|r| r.k == k && r.algo == algo)
    }

    pub fn outcome(&self, algo: Algorithm) -> Option<&RankOutcome> {
        self.outcomes.iter().find(|o| o.algorithm == algo)
    }

    pub fn write_csv<W: std::io::Write>(&self, out: W) -> csv::Result<()> {
        write_eval_csv(&self.rows, out)
    }
}

/// Write `k,algo,ri,spearman` rows.
pub fn write_eval_csv<W: std::io::Write>(rows: &[EvalRow], out: W) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    w.write_record(["k", "algo", "ri", "spearman"])?;
    for r in rows {
        w.write_record([r.k.to_string(), r.algo.to_string(), r.ri.to_string(), r.spearman.to_string()])?;
    }
    w.flush()?;
    Ok(())
}

/// Metric rows for already computed rankings.
pub fn score_rankings(
    outcomes: &[RankOutcome],
    truth: &GroundTruth,
    options: &EvalOptions,
) -> Result<(Vec<EvalRow>, Vec<usize>), EvalError> {
    let n = truth.ranking.len();
    let (ks, skipped): (Vec<usize>, Vec<usize>) = options.k_values.iter().partition(|&&k| k >= 1 && k <= n);
    if !skipped.is_empty() {
        log::warn!("skipping k values beyond the corpus size {n}: {skipped:?}");
    }
    let mut rows = Vec::new();
    for &k in &ks {
        for o in outcomes {
            rows.push(EvalRow {
                k,
                algo: o.algorithm,
                ri: ri_at_k(&o.ranking, &truth.ranking, k, options.ri_normalized)?,
                spearman: spearman_at_k(&o.ranking, &truth.ranking, k, options.spearman_domain)?,
            });
        }
    }
    Ok((rows, skipped))
}

/// Rank with all three algorithms and score each against the ground truth.
pub fn compare_algorithms(
    corpus: &Corpus,
    edges: &[WeightedEdge],
    credit: &CreditTable,
    params: &AlgorithmParams,
    decay: &DecayParams,
    options: &EvalOptions,
) -> Result<Comparison, EvalError> {
    let ground_truth = build_ground_truth(edges, corpus);
    let outcomes = Algorithm::ALL
        .into_iter()
        .map(|a| run_algorithm(a, corpus, edges, credit, params.get(a), decay, options.baseline_credit))
        .collect::<Result<Vec<_>, _>>()?;
    let (rows, skipped_k) = score_rankings(&outcomes, &ground_truth, options)?;
    Ok(Comparison { ground_truth, outcomes, rows, skipped_k })
}

/// Every `(α, β, γ, δ)` on the simplex grid with the given step summing to
/// 0.85. With `journal = false`, only points with γ = 0.
pub fn simplex_grid(step: f64, journal: bool) -> Vec<(f64, f64, f64, f64)> {
    let units = (rank::MAX_COMPONENT_MASS / step).round() as usize;
    let mut out = Vec::new();
    for a in 0..=units {
        for b in 0..=units - a {
            for g in 0..=units - a - b {
                if !journal && g > 0 {
                    continue;
                }
                let d = units - a - b - g;
                let f = |u: usize| u as f64 * step;
                out.push((f(a), f(b), f(g), f(d)));
            }
        }
    }
    out
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct GridResult {
    pub params: RankParams,
    /// Mean normalized RI@k on the validation papers.
    pub score: f64,
    pub evaluated: usize,
}

/// Validation papers: every other paper in id order.
pub fn validation_split(corpus: &Corpus) -> Vec<bool> {
    let mut ids: Vec<PaperIdx> = corpus.paper_indices().collect();
    ids.sort_by(|a, b| corpus.paper(*a).id.cmp(&corpus.paper(*b).id));
    let mut mask = vec![false; corpus.len()];
    for (i, p) in ids.into_iter().enumerate() {
        mask[p.index()] = i % 2 == 0;
    }
    mask
}

/// Choose mixing weights for `algo` by exhaustive search over the simplex
/// grid, maximizing mean normalized RI@k on the validation papers. Ties keep
/// the first grid point.
#[allow(clippy::too_many_arguments)]
pub fn grid_search(
    algo: Algorithm,
    corpus: &Corpus,
    edges: &[WeightedEdge],
    credit: &CreditTable,
    base: &RankParams,
    decay: &DecayParams,
    k_values: &[usize],
    step: f64,
    baseline_credit: BaselineCredit,
) -> Result<GridResult, EvalError> {
    let mask = validation_split(corpus);
    let truth = build_ground_truth(edges, corpus);
    let truth_val: Vec<PaperIdx> = truth.ranking.iter().copied().filter(|p| mask[p.index()]).collect();
    let ks: Vec<usize> = k_values.iter().copied().filter(|&k| k >= 1 && k <= truth_val.len()).collect();
    if ks.is_empty() {
        return Err(EvalError::KTooLarge { k: k_values.iter().copied().min().unwrap_or(0), len: truth_val.len() });
    }
    let grid = simplex_grid(step, algo != Algorithm::FutureRank);
    let scored: Vec<(f64, RankParams)> = grid
        .par_iter()
        .map(|&(alpha, beta, gamma, delta)| {
            let params = RankParams { alpha, beta, gamma, delta, ..*base };
            let outcome = run_algorithm(algo, corpus, edges, credit, &params, decay, baseline_credit)?;
            let ranked: Vec<PaperIdx> = outcome.ranking.into_iter().filter(|p| mask[p.index()]).collect();
            let mut total = 0.0;
            for &k in &ks {
                total += ri_at_k(&ranked, &truth_val, k, true)?;
            }
            Ok((total / ks.len() as f64, params))
        })
        .collect::<Result<_, EvalError>>()?;
    let mut best = 0;
    for (i, (score, _)) in scored.iter().enumerate() {
        if *score > scored[best].0 {
            best = i;
        }
    }
    Ok(GridResult { params: scored[best].1, score: scored[best].0, evaluated: scored.len() })
}
