//! Shared setup for the benchmarks.

use coirank_core::coi::{classify_corpus, ClassifyOptions, DecayParams, WeightedEdge, DEFAULT_RHO};
use coirank_core::corpus::{Corpus, IngestOptions};
use coirank_core::credit::{CreditScheme, CreditTable};
use coirank_core::graph_index::{build_indices, Indices};

pub struct Prepared {
    pub corpus: Corpus,
    pub indices: Indices,
    pub options: ClassifyOptions,
    pub edges: Vec<WeightedEdge>,
    pub credit: CreditTable,
}

/// Generated corpus with every stage up to ranking already computed.
pub fn prepare(n_papers: usize, rate: f64) -> Prepared {
    let fixture = coirank_core::generate_fixture(17, n_papers, rate).expect("valid fixture spec");
    let opts = IngestOptions { max_year: Some(2100), ..Default::default() };
    let corpus = Corpus::from_records(fixture.papers, &opts).expect("fixture ingests").corpus;
    let indices = build_indices(&corpus);
    let options = ClassifyOptions::new(DecayParams::for_corpus(&corpus, DEFAULT_RHO, None).expect("decay"));
    let edges = classify_corpus(&corpus, &indices, &options).expect("classify").edges;
    let credit = CreditTable::build(&corpus, CreditScheme::Collective);
    Prepared { corpus, indices, options, edges, credit }
}
