//! Straightforward re-derivations of the library's quantities, written
//! directly from the definitions without any of its indices.

use std::collections::BTreeSet;

use coirank_core::coi::{CoiClass, DecayParams, WEIGHT_FLOOR};
use coirank_core::corpus::Corpus;
use coirank_core::ids::{AuthorId, InstId, PaperIdx};

fn years_to_rate(years: &[i32]) -> Option<f64> {
    let first = *years.iter().min()?;
    let last = *years.iter().max()?;
    Some(years.len() as f64 / f64::from(last - first + 1))
}

fn authors(c: &Corpus, p: PaperIdx) -> Vec<AuthorId> {
    c.paper(p).authors.iter().map(|m| m.author).collect()
}

/// Coauthored papers of x and y (for x == y: papers of x) up to `upto`.
pub fn coauthor_years(c: &Corpus, x: AuthorId, y: AuthorId, upto: i32) -> Vec<i32> {
    c.paper_indices()
        .filter(|&p| {
            let a = authors(c, p);
            c.paper(p).year <= upto && a.contains(&x) && a.contains(&y)
        })
        .map(|p| c.paper(p).year)
        .collect()
}

/// Papers by x citing at least one paper by y (x != y) up to `upto`.
pub fn cite_years(c: &Corpus, x: AuthorId, y: AuthorId, upto: i32) -> Vec<i32> {
    if x == y {
        return Vec::new();
    }
    c.paper_indices()
        .filter(|&p| {
            c.paper(p).year <= upto
                && authors(c, p).contains(&x)
                && c.references_of(p).iter().any(|&r| authors(c, r).contains(&y))
        })
        .map(|p| c.paper(p).year)
        .collect()
}

pub fn author_ncoi(c: &Corpus, x: AuthorId, y: AuthorId, upto: i32) -> Option<f64> {
    years_to_rate(&coauthor_years(c, x, y, upto))
}

pub fn author_nscoi(c: &Corpus, x: AuthorId, y: AuthorId, upto: i32) -> Option<f64> {
    years_to_rate(&cite_years(c, x, y, upto))
}

pub fn paper_ncoi(c: &Corpus, citing: PaperIdx, cited: PaperIdx) -> f64 {
    let upto = c.paper(citing).year;
    let mut s = 0.0;
    for x in authors(c, citing) {
        for y in authors(c, cited) {
            s += author_ncoi(c, x, y, upto).unwrap_or(0.0);
        }
    }
    s
}

pub fn paper_nscoi(c: &Corpus, citing: PaperIdx, cited: PaperIdx) -> f64 {
    let upto = c.paper(citing).year;
    let mut s = 0.0;
    for x in authors(c, citing) {
        for y in authors(c, cited) {
            s += author_nscoi(c, x, y, upto).unwrap_or(0.0);
        }
    }
    s
}

fn cociters(c: &Corpus, i: PaperIdx, j: PaperIdx) -> Vec<PaperIdx> {
    c.paper_indices()
        .filter(|&k| c.references_of(k).contains(&i) && c.references_of(k).contains(&j))
        .collect()
}

fn paper_insts(c: &Corpus, p: PaperIdx) -> BTreeSet<InstId> {
    c.paper(p).authors.iter().flat_map(|m| m.affiliations.iter().copied()).collect()
}

pub fn weight(strength: f64, cite_year: i32, decay: &DecayParams) -> f64 {
    let span = f64::from(decay.t_current - cite_year + 1);
    (-decay.rho * span * strength).exp().max(WEIGHT_FLOOR)
}

/// Class, strength and weight of one citation from first principles.
pub fn classify(c: &Corpus, citing: PaperIdx, cited: PaperIdx, decay: &DecayParams) -> (CoiClass, f64, f64) {
    let upto = c.paper(citing).year;
    let coauthored = authors(c, citing)
        .into_iter()
        .any(|x| authors(c, cited).into_iter().any(|y| !coauthor_years(c, x, y, upto).is_empty()));
    if coauthored {
        let endpoint: BTreeSet<AuthorId> = authors(c, citing).into_iter().chain(authors(c, cited)).collect();
        let independent = cociters(c, citing, cited)
            .into_iter()
            .any(|k| authors(c, k).iter().all(|a| !endpoint.contains(a)));
        if independent {
            return (CoiClass::PositiveCoi, 0.0, 1.0);
        }
        let s = paper_ncoi(c, citing, cited);
        return (CoiClass::NegativeCoi, s, weight(s, upto, decay));
    }
    let shared_aff = c.paper(citing).authors.iter().any(|mx| {
        c.paper(cited)
            .authors
            .iter()
            .any(|my| mx.affiliations.iter().any(|a| my.affiliations.contains(a)))
    });
    if shared_aff {
        let endpoint: BTreeSet<InstId> = paper_insts(c, citing).union(&paper_insts(c, cited)).copied().collect();
        let independent = cociters(c, citing, cited)
            .into_iter()
            .any(|k| paper_insts(c, k).is_disjoint(&endpoint));
        if independent {
            return (CoiClass::PositiveSuspectedCoi, 0.0, 1.0);
        }
        let s = paper_nscoi(c, citing, cited);
        return (CoiClass::NegativeSuspectedCoi, s, weight(s, upto, decay));
    }
    (CoiClass::Normal, 0.0, 1.0)
}

/// Dense damped PageRank by power iteration; dangling papers spread evenly.
/// Scores flow from citing to cited paper.
pub fn pagerank(c: &Corpus, damping: f64, tol: f64) -> Vec<f64> {
    let n = c.len();
    let mut m = vec![vec![0.0f64; n]; n];
    for j in 0..n {
        let refs = c.references_of(PaperIdx(j as u32));
        if refs.is_empty() {
            for row in m.iter_mut() {
                row[j] = 1.0 / n as f64;
            }
        } else {
            for r in refs {
                m[r.index()][j] += 1.0 / refs.len() as f64;
            }
        }
    }
    let mut pr = vec![1.0 / n as f64; n];
    loop {
        let next: Vec<f64> = (0..n)
            .map(|i| (1.0 - damping) / n as f64 + damping * (0..n).map(|j| m[i][j] * pr[j]).sum::<f64>())
            .collect();
        let delta = next.iter().zip(&pr).map(|(a, b)| (a - b).abs()).fold(0.0, f64::max);
        pr = next;
        if delta < tol {
            return pr;
        }
    }
}

/// Collective credit recomputed by scanning every paper.
pub fn collective_credit(c: &Corpus, p: PaperIdx) -> Vec<(AuthorId, f64)> {
    let citers: Vec<PaperIdx> = c.paper_indices().filter(|&k| c.references_of(k).contains(&p)).collect();
    let mut raw = Vec::new();
    for a in authors(c, p) {
        let mut credit = 0.0;
        for d in c.paper_indices() {
            if !authors(c, d).contains(&a) {
                continue;
            }
            let s = if d == p {
                citers.len()
            } else {
                citers.iter().filter(|&&k| c.references_of(k).contains(&d)).count()
            };
            credit += s as f64 / authors(c, d).len() as f64;
        }
        raw.push((a, credit));
    }
    let total: f64 = raw.iter().map(|r| r.1).sum();
    if total <= 0.0 {
        let k = raw.len() as f64;
        return raw.into_iter().map(|(a, _)| (a, 1.0 / k)).collect();
    }
    raw.into_iter().map(|(a, v)| (a, v / total)).collect()
}

/// Textbook Spearman for two rankings of the same n items without ties.
pub fn spearman_textbook(rank_a: &[usize], rank_b: &[usize]) -> f64 {
    let n = rank_a.len() as f64;
    let d2: f64 = rank_a.iter().zip(rank_b).map(|(a, b)| (*a as f64 - *b as f64).powi(2)).sum();
    1.0 - 6.0 * d2 / (n * (n * n - 1.0))
}
