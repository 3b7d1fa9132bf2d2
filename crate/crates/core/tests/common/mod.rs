#![allow(dead_code)]

pub mod oracle;

use coirank_core::coi::{classify_corpus, Classification, ClassifyOptions, DecayParams, DEFAULT_RHO};
use coirank_core::corpus::{Corpus, IngestOptions, RawAuthor, RawPaper};
use coirank_core::credit::{CreditScheme, CreditTable};
use coirank_core::graph_index::{build_indices, Indices};
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn corpus_of(records: Vec<RawPaper>) -> Corpus {
    let opts = IngestOptions { max_year: Some(2100), ..Default::default() };
    let ingested = Corpus::from_records(records, &opts).expect("ingest");
    assert!(ingested.errors.is_empty(), "{:?}", ingested.errors);
    ingested.corpus
}

pub struct Pipeline {
    pub corpus: Corpus,
    pub indices: Indices,
    pub decay: DecayParams,
    pub classification: Classification,
    pub credit: CreditTable,
}

pub fn pipeline(records: Vec<RawPaper>) -> Pipeline {
    let corpus = corpus_of(records);
    let indices = build_indices(&corpus);
    let decay = DecayParams::for_corpus(&corpus, DEFAULT_RHO, None).unwrap();
    let classification = classify_corpus(&corpus, &indices, &ClassifyOptions::new(decay)).unwrap();
    let credit = CreditTable::build(&corpus, CreditScheme::Collective);
    Pipeline { corpus, indices, decay, classification, credit }
}

pub fn four_cases() -> Vec<RawPaper> {
    coirank_core::fixture::FOUR_CASES_JSONL
        .lines()
        .map(|l| serde_json::from_str(l).unwrap())
        .collect()
}

/// Small random corpus with a shared pool of authors and institutions so that
/// coauthorship, self-citation and affiliation overlap all occur.
pub fn random_records(rng: &mut ChaCha8Rng, max_papers: usize) -> Vec<RawPaper> {
    let n = rng.gen_range(2..=max_papers);
    let n_authors = rng.gen_range(2..=8);
    let n_inst = rng.gen_range(1..=4);
    let names: Vec<String> = (0..n_authors).map(|a| format!("Q{a} Author{a}")).collect();
    let home: Vec<usize> = (0..n_authors).map(|_| rng.gen_range(0..n_inst)).collect();
    let mut years: Vec<i64> = (0..n).map(|_| rng.gen_range(2000..=2012)).collect();
    years.sort_unstable();
    (0..n)
        .map(|i| {
            let k = rng.gen_range(1..=3.min(n_authors));
            let mut pool: Vec<usize> = (0..n_authors).collect();
            pool.shuffle(rng);
            let authors = pool[..k]
                .iter()
                .map(|&a| {
                    let mut affs = vec![format!("Inst {}", home[a])];
                    let extra = format!("Inst {}", rng.gen_range(0..n_inst));
                    if rng.gen_bool(0.2) && extra != affs[0] {
                        affs.push(extra);
                    }
                    let affs: Vec<&str> = affs.iter().map(String::as_str).collect();
                    RawAuthor::new(&names[a], &affs, Some(if home[a].is_multiple_of(2) { "US" } else { "DE" }))
                })
                .collect();
            let refs: Vec<String> = (0..i).filter(|_| rng.gen_bool(0.3)).map(|j| format!("p{j}")).collect();
            let refs: Vec<&str> = refs.iter().map(String::as_str).collect();
            RawPaper::new(&format!("p{i}"), years[i], &format!("J{}", i % 3), authors, &refs)
        })
        .collect()
}

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}
