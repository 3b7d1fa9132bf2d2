//! Fractional author credit per paper.
//!
//! The collective scheme gives each author of a paper credit in proportion to
//! how strongly the paper is co-cited with that author's other work: the
//! paper itself and every paper co-cited with it form the co-cited set, each
//! member weighted by its co-citation count and split evenly among its own
//! authors.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;

use crate::corpus::Corpus;
use crate::ids::{AuthorId, PaperIdx};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum CreditScheme {
    #[default]
    Collective,
    Uniform,
    FirstAuthor,
}

impl CreditScheme {
    pub fn as_str(self) -> &'static str {
        match self {
            CreditScheme::Collective => "collective",
            CreditScheme::Uniform => "uniform",
            CreditScheme::FirstAuthor => "first-author",
        }
    }
}

impl fmt::Display for CreditScheme {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for CreditScheme {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "collective" => Ok(CreditScheme::Collective),
            "uniform" => Ok(CreditScheme::Uniform),
            "first-author" | "first_author" => Ok(CreditScheme::FirstAuthor),
            other => Err(format!("unknown credit scheme {other:?}")),
        }
    }
}

/// Author shares for every paper, indexed by [`PaperIdx`]. Each paper's
/// entries follow byline order and sum to one.
#[derive(Debug, Clone, PartialEq)]
pub struct CreditTable {
    shares: Vec<Vec<(AuthorId, f64)>>,
}

impl CreditTable {
    pub fn build(corpus: &Corpus, scheme: CreditScheme) -> Self {
        let shares = corpus
            .paper_indices()
            .collect::<Vec<_>>()
            .into_par_iter()
            .map(|p| match scheme {
                CreditScheme::Collective => collective_shares(p, corpus),
                CreditScheme::Uniform => uniform_shares(p, corpus),
                CreditScheme::FirstAuthor => first_author_shares(p, corpus),
            })
            .collect();
        Self { shares }
    }

    /// Wrap precomputed shares, one list per paper in corpus order.
    pub fn from_shares(shares: Vec<Vec<(AuthorId, f64)>>) -> Self {
        Self { shares }
    }

    pub fn uniform(corpus: &Corpus) -> Self {
        Self::build(corpus, CreditScheme::Uniform)
    }

    pub fn shares(&self, p: PaperIdx) -> &[(AuthorId, f64)] {
        &self.shares[p.index()]
    }

    pub fn share(&self, p: PaperIdx, a: AuthorId) -> f64 {
        self.shares(p).iter().find(|(x, _)| *x == a).map_or(0.0, |(_, s)| *s)
    }

    pub fn len(&self) -> usize {
        self.shares.len()
    }

    pub fn is_empty(&self) -> bool {
        self.shares.is_empty()
    }

    /// Write `paper_id,author_key,share` rows.
    pub fn write_csv<W: std::io::Write>(&self, corpus: &Corpus, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["paper_id", "author_key", "share"])?;
        for p in corpus.paper_indices() {
            for &(a, s) in self.shares(p) {
                w.write_record([corpus.paper(p).id.as_str(), corpus.author_key(a), &s.to_string()])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}

fn uniform_shares(p: PaperIdx, corpus: &Corpus) -> Vec<(AuthorId, f64)> {
    let authors: Vec<AuthorId> = corpus.paper(p).author_ids().collect();
    let s = 1.0 / authors.len() as f64;
    authors.into_iter().map(|a| (a, s)).collect()
}

fn first_author_shares(p: PaperIdx, corpus: &Corpus) -> Vec<(AuthorId, f64)> {
    corpus
        .paper(p)
        .author_ids()
        .enumerate()
        .map(|(i, a)| (a, if i == 0 { 1.0 } else { 0.0 }))
        .collect()
}

/// Co-citation strength of `p` with every member of its co-cited set:
/// `p` itself maps to its citation count, every other paper to the number of
/// papers citing both.
pub fn cocited_set(p: PaperIdx, corpus: &Corpus) -> BTreeMap<PaperIdx, usize> {
    let mut strength: BTreeMap<PaperIdx, usize> = BTreeMap::new();
    let citers = corpus.citers_of(p);
    strength.insert(p, citers.len());
    for &c in citers {
        for &d in corpus.references_of(c) {
            if d != p {
                *strength.entry(d).or_default() += 1;
            }
        }
    }
    strength
}

/// Collective credit shares for one paper.
pub fn credit_shares(p: PaperIdx, corpus: &Corpus) -> Vec<(AuthorId, f64)> {
    collective_shares(p, corpus)
}

fn collective_shares(p: PaperIdx, corpus: &Corpus) -> Vec<(AuthorId, f64)> {
    let paper = corpus.paper(p);
    let cocited = cocited_set(p, corpus);
    let raw: Vec<(AuthorId, f64)> = paper
        .author_ids()
        .map(|a| {
            let credit: f64 = cocited
                .iter()
                .filter(|(&d, _)| corpus.paper(d).has_author(a))
                .map(|(&d, &s)| s as f64 / corpus.paper(d).authors.len() as f64)
                .sum();
            (a, credit)
        })
        .collect();
    let total: f64 = raw.iter().map(|(_, c)| c).sum();
    if total <= 0.0 {
        return uniform_shares(p, corpus);
    }
    raw.into_iter().map(|(a, c)| (a, c / total)).collect()
}
