//! Seeded synthetic corpora.
//!
//! Papers belong to research groups; each group is one institution with a
//! small author pool. Organic references go to other groups by preferential
//! attachment, so a corpus generated at rate 0 contains no conflicts. At a
//! positive rate, each paper is instead written, with that probability, by
//! one of a few citation rings: a ring's papers all carry its lead author and
//! cite the ring's first papers and its latest one.

use std::io::Write;

use rand::distributions::{Distribution, WeightedIndex};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::corpus::{RawAuthor, RawPaper};

pub const FIRST_YEAR: i64 = 1990;
pub const LAST_YEAR: i64 = 2015;
const AUTHORS_PER_GROUP: usize = 4;
const PAPERS_PER_GROUP: usize = 25;
const MAX_ORGANIC_REFS: usize = 6;
const RING_TARGETS: usize = 3;
const GROUPS_PER_RING: usize = 40;
const JOURNALS: usize = 5;
const COUNTRIES: [&str; 4] = ["US", "DE", "CN", "JP"];

/// The four hand-built COI configurations, one per class.
pub const FOUR_CASES_JSONL: &str = include_str!("../fixtures/coi_four_cases.jsonl");

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum FixtureError {
    #[error("injection rate {0} is outside [0, 1]")]
    BadRate(f64),
    #[error("need at least 2 papers, got {0}")]
    TooFewPapers(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FixtureSpec {
    pub seed: u64,
    pub n_papers: usize,
    pub rate: f64,
}

/// Group membership of each generated paper, kept for tests that need the
/// planted structure.
#[derive(Debug, Clone, PartialEq)]
pub struct Fixture {
    pub papers: Vec<RawPaper>,
    pub group_of: Vec<usize>,
    /// Papers written by a citation ring.
    pub cartel_members: Vec<bool>,
}

impl Fixture {
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        for p in &self.papers {
            serde_json::to_writer(&mut out, p)?;
            out.write_all(b"\n")?;
        }
        Ok(())
    }
}

fn author_name(group: usize, slot: usize) -> String {
    // Distinct given-name initials and surnames keep normalized keys unique.
    let given = ["Ann", "Bob", "Cid", "Dee"][slot % AUTHORS_PER_GROUP];
    format!("{given} Group{group}x{slot}")
}

pub fn generate_fixture(seed: u64, n_papers: usize, rate: f64) -> Result<Fixture, FixtureError> {
    if !(0.0..=1.0).contains(&rate) {
        return Err(FixtureError::BadRate(rate));
    }
    if n_papers < 2 {
        return Err(FixtureError::TooFewPapers(n_papers));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let n_groups = (n_papers / PAPERS_PER_GROUP).max(2);
    let n_rings = (n_groups / GROUPS_PER_RING).max(1);
    let span = (LAST_YEAR - FIRST_YEAR) as f64;

    let mut papers = Vec::with_capacity(n_papers);
    let mut group_of = Vec::with_capacity(n_papers);
    let mut cartel_members = Vec::with_capacity(n_papers);
    let mut organic_in = vec![0usize; n_papers];
    let mut by_group: Vec<Vec<usize>> = vec![Vec::new(); n_groups + n_rings];

    for i in 0..n_papers {
        let year = FIRST_YEAR + (span * i as f64 / n_papers as f64).floor() as i64;
        let cartel = rate > 0.0 && rng.gen_bool(rate);
        let group = if cartel { n_groups + rng.gen_range(0..n_rings) } else { rng.gen_range(0..n_groups) };
        let n_auth = rng.gen_range(1..=3);
        let mut slots: Vec<usize> = (0..AUTHORS_PER_GROUP).collect();
        slots.shuffle(&mut rng);
        slots.truncate(n_auth);
        if cartel && !slots.contains(&0) {
            slots[0] = 0;
        }
        slots.sort_unstable();
        let inst = format!("Institute {group}");
        let country = COUNTRIES[group % COUNTRIES.len()];
        let authors = slots
            .iter()
            .map(|&s| RawAuthor::new(&author_name(group, s), &[inst.as_str()], Some(country)))
            .collect();

        let mut refs: Vec<usize> = Vec::new();
        let outside: Vec<usize> = (0..i).filter(|&j| group_of[j] != group).collect();
        if !outside.is_empty() {
            let want = rng.gen_range(1..=MAX_ORGANIC_REFS).min(outside.len());
            let weights: Vec<usize> = outside.iter().map(|&j| organic_in[j] + 1).collect();
            let dist = WeightedIndex::new(&weights).expect("positive weights");
            let mut attempts = 0;
            while refs.len() < want && attempts < 8 * want {
                attempts += 1;
                let j = outside[dist.sample(&mut rng)];
                if !refs.contains(&j) {
                    refs.push(j);
                }
            }
        }
        for &j in &refs {
            organic_in[j] += 1;
        }

        if cartel {
            let ring = &by_group[group];
            refs.extend(ring.iter().take(RING_TARGETS));
            if let Some(&last) = ring.last() {
                if !refs.contains(&last) {
                    refs.push(last);
                }
            }
        }

        refs.sort_unstable();
        papers.push(RawPaper {
            id: Some(format!("P{i:05}")),
            year: Some(year),
            journal: Some(format!("Journal {}", rng.gen_range(0..JOURNALS))),
            title: Some(format!("Synthetic paper {i}")),
            authors: Some(authors),
            references: refs.iter().map(|j| format!("P{j:05}")).collect(),
        });
        group_of.push(group);
        cartel_members.push(cartel);
        by_group[group].push(i);
    }
    Ok(Fixture { papers, group_of, cartel_members })
}
