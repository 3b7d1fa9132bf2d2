//! Conflict-of-interest aware citation ranking.
//!
//! Pipeline: [`corpus`] ingestion, relationship [`graph_index`]es, per-edge
//! [`coi`] classification and weighting, [`credit`] allocation, the
//! [`rank`] iteration with two baselines, [`impact`] aggregation and
//! [`eval`]uation against a COI-free ground truth.

pub mod coi;
pub mod corpus;
pub mod credit;
pub mod eval;
pub mod fixture;
pub mod graph_index;
pub mod ids;
pub mod impact;
pub mod normalize;
pub mod rank;

pub use coi::{classify_corpus, Classification, ClassifyOptions, CoiClass, CoiError, DecayParams, WeightedEdge};
pub use corpus::{ingest, Corpus, CorpusError, IngestOptions, Ingested, InputFormat, RawAuthor, RawPaper};
pub use credit::{CreditScheme, CreditTable};
pub use eval::{compare_algorithms, AlgorithmParams, BaselineCredit, Comparison, EvalError, EvalOptions, SpearmanDomain};
pub use fixture::{generate_fixture, Fixture, FixtureError};
pub use graph_index::{build_indices, HistoryScope, Indices};
pub use ids::{AuthorId, InstId, JournalId, PaperIdx};
pub use impact::{aggregate, CoicAttribution, CoicOptions, ImpactReport};
pub use normalize::{normalize_affiliation, normalize_author, AliasTable};
pub use rank::{Algorithm, RankError, RankOutcome, RankParams};
