//! Flag and config-file handling.
//!
//! Every long flag has a config-file key of the same (kebab-case) name. The
//! config file is flat TOML; flags given on the command line win.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};

use anyhow::{bail, Context, Result};
use clap::Args;
use serde::{Deserialize, Serialize};

use coirank_core::coi::DEFAULT_RHO;
use coirank_core::eval::{k_grid, BaselineCredit, EvalOptions, SpearmanDomain};
use coirank_core::rank::{Algorithm, RankParams};
use coirank_core::{CoiClass, CoicAttribution, CoicOptions, CreditScheme};

#[derive(Debug, Clone, Default, Args, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case", deny_unknown_fields)]
pub struct Settings {
    /// Corpus in JSON-Lines format.
    #[arg(long, short, global = true)]
    pub input: Option<PathBuf>,
    /// Directory receiving all artifacts.
    #[arg(long, short, global = true)]
    pub out_dir: Option<PathBuf>,
    /// JSON object mapping affiliation keys to canonical keys.
    #[arg(long, global = true)]
    pub alias_file: Option<PathBuf>,
    /// JSON object mapping author keys to canonical keys.
    #[arg(long, global = true)]
    pub author_alias_file: Option<PathBuf>,
    /// Latest publication year accepted at ingestion.
    #[arg(long, global = true)]
    pub max_year: Option<i32>,
    /// Reuse an edge file from `classify` instead of reclassifying.
    #[arg(long, global = true)]
    pub edges: Option<PathBuf>,
    /// Only count relationship history from the last N years before a citation.
    #[arg(long, global = true)]
    pub coi_window: Option<u32>,
    /// Decay constant for negative edges and the FutureRank prior.
    #[arg(long, global = true)]
    pub rho: Option<f64>,
    /// Reference year for edge decay (default: latest publication year).
    #[arg(long, global = true)]
    pub eval_year: Option<i32>,
    /// collective, uniform or first-author.
    #[arg(long, global = true)]
    pub credit_scheme: Option<String>,
    /// Write per-paper author shares to this CSV.
    #[arg(long, global = true)]
    pub dump_credit: Option<PathBuf>,
    /// Write the relationship indices to this CSV.
    #[arg(long, global = true)]
    pub dump_indices: Option<PathBuf>,
    #[arg(long, global = true)]
    pub alpha: Option<f64>,
    #[arg(long, global = true)]
    pub beta: Option<f64>,
    #[arg(long, global = true)]
    pub gamma: Option<f64>,
    #[arg(long, global = true)]
    pub delta: Option<f64>,
    /// Convergence threshold on the largest per-paper score change.
    #[arg(long, global = true)]
    pub epsilon: Option<f64>,
    #[arg(long, global = true)]
    pub max_iters: Option<usize>,
    /// pandora, cajtrank or futurerank.
    #[arg(long, global = true)]
    pub algo: Option<String>,
    /// Tune alpha..delta on a validation split before ranking.
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    pub grid_search: Option<bool>,
    /// Grid spacing for --grid-search.
    #[arg(long, global = true)]
    pub grid_step: Option<f64>,
    /// Credit table used by the baselines: shared or uniform.
    #[arg(long, global = true)]
    pub cajtrank_credit: Option<String>,
    /// Side that a COI citation is charged to: cited, citing or both.
    #[arg(long, global = true)]
    pub coic_attribution: Option<String>,
    /// Comma-separated COI classes counted by COIC.
    #[arg(long, global = true)]
    pub coic_classes: Option<String>,
    #[arg(long, global = true)]
    pub k_min: Option<usize>,
    #[arg(long, global = true)]
    pub k_max: Option<usize>,
    #[arg(long, global = true)]
    pub k_step: Option<usize>,
    /// Divide list RI by its maximum so that it lies in [0, 1].
    #[arg(long, global = true, num_args = 0..=1, default_missing_value = "true")]
    pub ri_normalized: Option<bool>,
    /// union, intersection or full.
    #[arg(long, global = true)]
    pub spearman_domain: Option<String>,
    /// Fixture generator seed.
    #[arg(long, global = true)]
    pub seed: Option<u64>,
    /// Fixture size.
    #[arg(long, global = true)]
    pub n_papers: Option<usize>,
    /// Fraction of fixture papers written by citation rings.
    #[arg(long, global = true)]
    pub rate: Option<f64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
}

impl Settings {
    pub fn from_file(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        toml::from_str(&text).with_context(|| format!("parsing config {}", path.display()))
    }

    /// Values from `self`, falling back to `base` for anything unset.
    pub fn over(self, base: Settings) -> Result<Settings> {
        let mut merged = serde_json::to_value(base)?;
        let top = serde_json::to_value(self)?;
        if let (Some(m), Some(t)) = (merged.as_object_mut(), top.as_object()) {
            for (k, v) in t {
                if !v.is_null() {
                    m.insert(k.clone(), v.clone());
                }
            }
        }
        Ok(serde_json::from_value(merged)?)
    }
}

fn parse<T: std::str::FromStr<Err = String>>(flag: &str, value: Option<&str>, default: T) -> Result<T> {
    match value {
        None => Ok(default),
        Some(v) => v.parse().map_err(|e| anyhow::anyhow!("--{flag}: {e}")),
    }
}

/// Fully resolved run configuration; serialized into the manifest.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub input: Option<PathBuf>,
    pub out_dir: PathBuf,
    pub alias_file: Option<PathBuf>,
    pub author_alias_file: Option<PathBuf>,
    pub max_year: Option<i32>,
    pub edges: Option<PathBuf>,
    pub coi_window: Option<u32>,
    pub rho: f64,
    pub eval_year: Option<i32>,
    pub credit_scheme: String,
    #[serde(skip)]
    pub scheme: CreditScheme,
    pub dump_credit: Option<PathBuf>,
    pub dump_indices: Option<PathBuf>,
    pub params: RankParams,
    pub algo: Algorithm,
    pub grid_search: bool,
    pub grid_step: f64,
    pub cajtrank_credit: BaselineCredit,
    pub coic_attribution: CoicAttribution,
    pub coic_classes: Vec<CoiClass>,
    pub k_min: usize,
    pub k_max: usize,
    pub k_step: usize,
    pub ri_normalized: bool,
    pub spearman_domain: SpearmanDomain,
    pub seed: u64,
    pub n_papers: usize,
    pub rate: f64,
    pub threads: Option<usize>,
}

impl RunConfig {
    pub fn resolve(s: Settings) -> Result<Self> {
        let scheme: CreditScheme = parse("credit-scheme", s.credit_scheme.as_deref(), CreditScheme::Collective)?;
        let defaults = RankParams::default();
        let rho = s.rho.unwrap_or(DEFAULT_RHO);
        let params = RankParams {
            alpha: s.alpha.unwrap_or(defaults.alpha),
            beta: s.beta.unwrap_or(defaults.beta),
            gamma: s.gamma.unwrap_or(defaults.gamma),
            delta: s.delta.unwrap_or(defaults.delta),
            rho,
            epsilon: s.epsilon.unwrap_or(defaults.epsilon),
            max_iters: s.max_iters.unwrap_or(defaults.max_iters),
        };
        params.validate().context("invalid ranking parameters")?;
        let coic_classes = match s.coic_classes.as_deref() {
            None => CoicOptions::default().classes.into_iter().collect(),
            Some(list) => {
                let mut set = BTreeSet::new();
                for item in list.split(',').map(str::trim).filter(|x| !x.is_empty()) {
                    let class: CoiClass = item.parse().map_err(|e| anyhow::anyhow!("--coic-classes: {e}"))?;
                    if !class.is_coi() {
                        bail!("--coic-classes: NORMAL is not a COI class");
                    }
                    set.insert(class);
                }
                set.into_iter().collect()
            }
        };
        let k_min = s.k_min.unwrap_or(10);
        let k_max = s.k_max.unwrap_or(300);
        let k_step = s.k_step.unwrap_or(10);
        if k_min == 0 || k_step == 0 || k_max < k_min {
            bail!("k range must satisfy 1 <= k-min <= k-max with k-step >= 1");
        }
        let grid_step = s.grid_step.unwrap_or(0.05);
        if !(grid_step > 0.0 && grid_step <= 0.85) {
            bail!("--grid-step must lie in (0, 0.85]");
        }
        if let Some(0) = s.threads {
            bail!("--threads must be at least 1");
        }
        Ok(Self {
            input: s.input,
            out_dir: s.out_dir.unwrap_or_else(|| PathBuf::from("coirank-out")),
            alias_file: s.alias_file,
            author_alias_file: s.author_alias_file,
            max_year: s.max_year,
            edges: s.edges,
            coi_window: s.coi_window,
            rho,
            eval_year: s.eval_year,
            credit_scheme: scheme.to_string(),
            scheme,
            dump_credit: s.dump_credit,
            dump_indices: s.dump_indices,
            params,
            algo: parse("algo", s.algo.as_deref(), Algorithm::Pandora)?,
            grid_search: s.grid_search.unwrap_or(false),
            grid_step,
            cajtrank_credit: parse("cajtrank-credit", s.cajtrank_credit.as_deref(), BaselineCredit::Shared)?,
            coic_attribution: parse("coic-attribution", s.coic_attribution.as_deref(), CoicAttribution::Cited)?,
            coic_classes,
            k_min,
            k_max,
            k_step,
            ri_normalized: s.ri_normalized.unwrap_or(true),
            spearman_domain: parse("spearman-domain", s.spearman_domain.as_deref(), SpearmanDomain::Union)?,
            seed: s.seed.unwrap_or(1),
            n_papers: s.n_papers.unwrap_or(1000),
            rate: s.rate.unwrap_or(0.2),
            threads: s.threads,
        })
    }

    pub fn coic_options(&self) -> CoicOptions {
        CoicOptions { attribution: self.coic_attribution, classes: self.coic_classes.iter().copied().collect() }
    }

    pub fn eval_options(&self) -> EvalOptions {
        EvalOptions {
            k_values: k_grid(self.k_min, self.k_max, self.k_step),
            ri_normalized: self.ri_normalized,
            spearman_domain: self.spearman_domain,
            baseline_credit: self.cajtrank_credit,
        }
    }

    pub fn input(&self) -> Result<&Path> {
        self.input.as_deref().context("no input corpus given (use --input or the `input` config key)")
    }
}
