use std::fs::File;
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use serde::Serialize;
use sha2::{Digest, Sha256};

use coirank_core::coi::{read_edges_csv, write_edges_csv, CoiSummary};
use coirank_core::eval::{self, run_algorithm, score_rankings, GridResult};
use coirank_core::fixture::{generate_fixture, FOUR_CASES_JSONL};
use coirank_core::graph_index::dump_indices;
use coirank_core::rank::{Algorithm, RankOutcome, RankParams};
use coirank_core::{
    aggregate, build_indices, classify_corpus, ingest, AliasTable, ClassifyOptions, Corpus, CreditTable,
    DecayParams, IngestOptions, InputFormat, WeightedEdge,
};

use crate::settings::RunConfig;

/// What a command produced, for the manifest and the exit code.
#[derive(Debug, Default, Serialize)]
pub struct Report {
    pub corpus: Option<CorpusInfo>,
    pub coi_summary: Option<CoiSummary>,
    pub runs: Vec<RunInfo>,
    pub artifacts: Vec<PathBuf>,
}

impl Report {
    pub fn converged(&self) -> bool {
        self.runs.iter().all(|r| r.converged)
    }
}

#[derive(Debug, Serialize)]
pub struct CorpusInfo {
    pub path: PathBuf,
    pub sha256: String,
    pub papers: usize,
    pub edges: usize,
    pub dangling_references: usize,
    pub rejected_records: usize,
}

#[derive(Debug, Serialize)]
pub struct RunInfo {
    pub algorithm: Algorithm,
    pub params: RankParams,
    pub converged: bool,
    pub iterations: usize,
    pub last_delta: f64,
    /// Validation score of the chosen grid point, when tuned.
    pub grid_score: Option<f64>,
}

#[derive(Serialize)]
struct Manifest<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'a str,
    config: &'a RunConfig,
    #[serde(flatten)]
    report: &'a Report,
    timestamp: String,
}

pub fn write_manifest(cfg: &RunConfig, command: &str, report: &Report) -> Result<PathBuf> {
    let path = cfg.out_dir.join("manifest.json");
    let manifest = Manifest {
        tool: env!("CARGO_PKG_NAME"),
        version: env!("CARGO_PKG_VERSION"),
        command,
        config: cfg,
        report,
        timestamp: chrono::Utc::now().to_rfc3339(),
    };
    let mut out = create(&path)?;
    serde_json::to_writer_pretty(&mut out, &manifest)?;
    out.write_all(b"\n")?;
    out.flush()?;
    Ok(path)
}

fn create(path: &Path) -> Result<BufWriter<File>> {
    if let Some(dir) = path.parent().filter(|d| !d.as_os_str().is_empty()) {
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
    }
    let file = File::create(path).with_context(|| format!("creating {}", path.display()))?;
    Ok(BufWriter::new(file))
}

fn write_artifact<F>(report: &mut Report, path: PathBuf, f: F) -> Result<()>
where
    F: FnOnce(&mut BufWriter<File>) -> Result<()>,
{
    let mut out = create(&path)?;
    f(&mut out)?;
    out.flush()?;
    report.artifacts.push(path);
    Ok(())
}

fn load_aliases(path: Option<&Path>, authors: bool) -> Result<AliasTable> {
    let Some(path) = path else { return Ok(AliasTable::new()) };
    let text = std::fs::read_to_string(path).with_context(|| format!("reading alias file {}", path.display()))?;
    let table = if authors { AliasTable::authors_from_json(&text) } else { AliasTable::affiliations_from_json(&text) };
    table.with_context(|| format!("parsing alias file {}", path.display()))
}

pub fn load_corpus(cfg: &RunConfig, report: &mut Report) -> Result<Corpus> {
    let path = cfg.input()?;
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let options = IngestOptions {
        affiliation_aliases: load_aliases(cfg.alias_file.as_deref(), false)?,
        author_aliases: load_aliases(cfg.author_alias_file.as_deref(), true)?,
        max_year: cfg.max_year,
    };
    let ingested = ingest(bytes.as_slice(), InputFormat::Jsonl, &options)?;
    for e in &ingested.errors {
        log::warn!("line {}: record {:?} rejected: {}", e.line, e.id.as_deref().unwrap_or("?"), e.issue);
    }
    let corpus = ingested.corpus;
    if corpus.is_empty() {
        bail!("corpus {} is empty: no valid records", path.display());
    }
    report.corpus = Some(CorpusInfo {
        path: path.to_path_buf(),
        sha256: hex::encode(Sha256::digest(&bytes)),
        papers: corpus.len(),
        edges: corpus.edges().len(),
        dangling_references: corpus.dangling().len(),
        rejected_records: ingested.errors.len(),
    });
    Ok(corpus)
}

pub struct Classified {
    pub edges: Vec<WeightedEdge>,
    pub decay: DecayParams,
}

fn classify_stage(cfg: &RunConfig, corpus: &Corpus, report: &mut Report) -> Result<Classified> {
    let decay = DecayParams::for_corpus(corpus, cfg.rho, cfg.eval_year)?;
    let needs_indices = cfg.edges.is_none() || cfg.dump_indices.is_some();
    let indices = needs_indices.then(|| build_indices(corpus));
    if let (Some(path), Some(indices)) = (&cfg.dump_indices, &indices) {
        write_artifact(report, path.clone(), |out| Ok(dump_indices(indices, corpus, out)?))?;
    }
    let edges = match (&cfg.edges, indices) {
        (Some(path), _) => {
            let file = File::open(path).with_context(|| format!("opening edge file {}", path.display()))?;
            read_edges_csv(corpus, std::io::BufReader::new(file))
                .with_context(|| format!("reading edge file {}", path.display()))?
        }
        (None, Some(indices)) => {
            let options = ClassifyOptions { decay, coi_window: cfg.coi_window };
            let classification = classify_corpus(corpus, &indices, &options)?;
            report.coi_summary = Some(classification.summary);
            classification.edges
        }
        (None, None) => unreachable!("indices are built whenever no edge file is given"),
    };
    Ok(Classified { edges, decay })
}

fn credit_stage(cfg: &RunConfig, corpus: &Corpus, report: &mut Report) -> Result<CreditTable> {
    let credit = CreditTable::build(corpus, cfg.scheme);
    if let Some(path) = &cfg.dump_credit {
        write_artifact(report, path.clone(), |out| Ok(credit.write_csv(corpus, out)?))?;
    }
    Ok(credit)
}

fn rank_stage(
    cfg: &RunConfig,
    algo: Algorithm,
    corpus: &Corpus,
    classified: &Classified,
    credit: &CreditTable,
    report: &mut Report,
) -> Result<RankOutcome> {
    let mut params = cfg.params;
    let mut grid: Option<GridResult> = None;
    if cfg.grid_search {
        let ks = eval::k_grid(cfg.k_min, cfg.k_max, cfg.k_step);
        let g = eval::grid_search(
            algo,
            corpus,
            &classified.edges,
            credit,
            &params,
            &classified.decay,
            &ks,
            cfg.grid_step,
            cfg.cajtrank_credit,
        )?;
        log::info!("{algo}: grid search chose {:?} (score {:.4} over {} points)", g.params, g.score, g.evaluated);
        params = g.params;
        grid = Some(g);
    }
    let outcome = run_algorithm(algo, corpus, &classified.edges, credit, &params, &classified.decay, cfg.cajtrank_credit)?;
    report.runs.push(RunInfo {
        algorithm: algo,
        params: if algo == Algorithm::FutureRank { RankParams { gamma: 0.0, ..params } } else { params },
        converged: outcome.converged(),
        iterations: outcome.state.iterations,
        last_delta: outcome.state.last_delta,
        grid_score: grid.map(|g| g.score),
    });
    Ok(outcome)
}

fn write_edges(cfg: &RunConfig, corpus: &Corpus, classified: &Classified, report: &mut Report) -> Result<()> {
    write_artifact(report, cfg.out_dir.join("edges.csv"), |out| Ok(write_edges_csv(&classified.edges, corpus, out)?))?;
    if let Some(summary) = report.coi_summary.clone() {
        write_artifact(report, cfg.out_dir.join("coi_summary.json"), |out| {
            serde_json::to_writer_pretty(&mut *out, &summary)?;
            Ok(out.write_all(b"\n")?)
        })?;
    }
    Ok(())
}

fn write_ranking(cfg: &RunConfig, corpus: &Corpus, outcome: &RankOutcome, report: &mut Report) -> Result<()> {
    let path = cfg.out_dir.join(format!("ranking_{}.csv", outcome.algorithm));
    write_artifact(report, path, |out| Ok(outcome.write_csv(corpus, out)?))
}

fn write_aggregates(
    cfg: &RunConfig,
    corpus: &Corpus,
    scores: &[f64],
    credit: &CreditTable,
    edges: &[WeightedEdge],
    report: &mut Report,
) -> Result<()> {
    let agg = aggregate(corpus, scores, credit, edges, &cfg.coic_options());
    let dir = &cfg.out_dir;
    write_artifact(report, dir.join("scholars.csv"), |out| Ok(agg.write_scholars(corpus, out)?))?;
    write_artifact(report, dir.join("institutions.csv"), |out| Ok(agg.write_institutions(out)?))?;
    write_artifact(report, dir.join("countries.csv"), |out| Ok(agg.write_countries(out)?))?;
    write_artifact(report, dir.join("yearly_coic.csv"), |out| Ok(agg.write_yearly_coic(out)?))?;
    write_artifact(report, dir.join("yearly_impact.csv"), |out| Ok(agg.write_yearly_impact(out)?))?;
    Ok(())
}

#[derive(Serialize)]
struct IngestSummary<'a> {
    papers: usize,
    edges: usize,
    authors: usize,
    institutions: usize,
    journals: usize,
    dangling_references: Vec<(&'a str, &'a str)>,
    year_anomalies: Vec<(&'a str, &'a str)>,
}

pub fn ingest_cmd(cfg: &RunConfig) -> Result<Report> {
    let mut report = Report::default();
    let corpus = load_corpus(cfg, &mut report)?;
    let id = |p| corpus.paper(p).id.as_str();
    let summary = IngestSummary {
        papers: corpus.len(),
        edges: corpus.edges().len(),
        authors: corpus.author_count(),
        institutions: corpus.institutions().len(),
        journals: corpus.journal_count(),
        dangling_references: corpus.dangling().iter().map(|d| (id(d.citing), d.target.as_str())).collect(),
        year_anomalies: corpus.year_anomalies().iter().map(|&(a, b)| (id(a), id(b))).collect(),
    };
    write_artifact(&mut report, cfg.out_dir.join("ingest.json"), |out| {
        serde_json::to_writer_pretty(&mut *out, &summary)?;
        Ok(out.write_all(b"\n")?)
    })?;
    println!(
        "{} papers, {} edges, {} dangling references, {} rejected records",
        summary.papers,
        summary.edges,
        summary.dangling_references.len(),
        report.corpus.as_ref().map_or(0, |c| c.rejected_records)
    );
    Ok(report)
}

pub fn classify_cmd(cfg: &RunConfig) -> Result<Report> {
    let mut report = Report::default();
    let corpus = load_corpus(cfg, &mut report)?;
    let classified = classify_stage(cfg, &corpus, &mut report)?;
    write_edges(cfg, &corpus, &classified, &mut report)?;
    if let Some(s) = &report.coi_summary {
        for (class, n) in &s.edges {
            println!("{class}\t{n}");
        }
    }
    Ok(report)
}

pub fn rank_cmd(cfg: &RunConfig) -> Result<Report> {
    let mut report = Report::default();
    let corpus = load_corpus(cfg, &mut report)?;
    let classified = classify_stage(cfg, &corpus, &mut report)?;
    let credit = credit_stage(cfg, &corpus, &mut report)?;
    let outcome = rank_stage(cfg, cfg.algo, &corpus, &classified, &credit, &mut report)?;
    write_ranking(cfg, &corpus, &outcome, &mut report)?;
    Ok(report)
}

pub fn aggregate_cmd(cfg: &RunConfig) -> Result<Report> {
    let mut report = Report::default();
    let corpus = load_corpus(cfg, &mut report)?;
    let classified = classify_stage(cfg, &corpus, &mut report)?;
    let credit = credit_stage(cfg, &corpus, &mut report)?;
    let outcome = rank_stage(cfg, cfg.algo, &corpus, &classified, &credit, &mut report)?;
    write_aggregates(cfg, &corpus, &outcome.state.scores, &credit, &classified.edges, &mut report)?;
    Ok(report)
}

fn eval_stage(
    cfg: &RunConfig,
    corpus: &Corpus,
    classified: &Classified,
    outcomes: &[RankOutcome],
    report: &mut Report,
) -> Result<()> {
    let truth = eval::build_ground_truth(&classified.edges, corpus);
    let (rows, _) = score_rankings(outcomes, &truth, &cfg.eval_options())?;
    write_artifact(report, cfg.out_dir.join("eval.csv"), |out| Ok(eval::write_eval_csv(&rows, out)?))
}

pub fn eval_cmd(cfg: &RunConfig) -> Result<Report> {
    let mut report = Report::default();
    let corpus = load_corpus(cfg, &mut report)?;
    let classified = classify_stage(cfg, &corpus, &mut report)?;
    let credit = credit_stage(cfg, &corpus, &mut report)?;
    let outcomes = Algorithm::ALL
        .into_iter()
        .map(|a| rank_stage(cfg, a, &corpus, &classified, &credit, &mut report))
        .collect::<Result<Vec<_>>>()?;
    eval_stage(cfg, &corpus, &classified, &outcomes, &mut report)?;
    Ok(report)
}

pub fn pipeline_cmd(cfg: &RunConfig) -> Result<Report> {
    let mut report = Report::default();
    let corpus = load_corpus(cfg, &mut report)?;
    let classified = classify_stage(cfg, &corpus, &mut report)?;
    write_edges(cfg, &corpus, &classified, &mut report)?;
    let credit = credit_stage(cfg, &corpus, &mut report)?;
    let mut outcomes = Vec::new();
    for algo in Algorithm::ALL {
        let outcome = rank_stage(cfg, algo, &corpus, &classified, &credit, &mut report)?;
        write_ranking(cfg, &corpus, &outcome, &mut report)?;
        outcomes.push(outcome);
    }
    let primary = outcomes.iter().find(|o| o.algorithm == cfg.algo).expect("every algorithm was run");
    write_aggregates(cfg, &corpus, &primary.state.scores, &credit, &classified.edges, &mut report)?;
    eval_stage(cfg, &corpus, &classified, &outcomes, &mut report)?;
    Ok(report)
}

pub fn fixture_cmd(cfg: &RunConfig, four_cases: bool, output: Option<&Path>) -> Result<()> {
    let mut out: Box<dyn Write> = match output {
        Some(path) => Box::new(create(path)?),
        None => Box::new(std::io::stdout().lock()),
    };
    if four_cases {
        out.write_all(FOUR_CASES_JSONL.as_bytes())?;
    } else {
        let fixture = generate_fixture(cfg.seed, cfg.n_papers, cfg.rate)?;
        fixture.write_jsonl(&mut out)?;
    }
    out.flush()?;
    Ok(())
}
