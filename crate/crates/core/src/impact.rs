//! Rolling paper scores up to scholars, institutions and countries, and the
//! COI-citation statistics per institution and country.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::io::Write;
use std::str::FromStr;

use serde::Serialize;

use crate::coi::{CoiClass, WeightedEdge};
use crate::corpus::Corpus;
use crate::credit::CreditTable;
use crate::ids::{AuthorId, InstId, PaperIdx};

/// Bucket label for mass or counts that cannot be attributed.
pub const UNKNOWN: &str = "UNKNOWN";

/// Where a COI citation is counted.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CoicAttribution {
    #[default]
    Cited,
    Citing,
    Both,
}

impl fmt::Display for CoicAttribution {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            CoicAttribution::Cited => "cited",
            CoicAttribution::Citing => "citing",
            CoicAttribution::Both => "both",
        })
    }
}

impl FromStr for CoicAttribution {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "cited" => Ok(CoicAttribution::Cited),
            "citing" => Ok(CoicAttribution::Citing),
            "both" => Ok(CoicAttribution::Both),
            other => Err(format!("unknown attribution {other:?}")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoicOptions {
    pub attribution: CoicAttribution,
    /// Classes counted as COI citations.
    pub classes: BTreeSet<CoiClass>,
}

impl Default for CoicOptions {
    fn default() -> Self {
        Self {
            attribution: CoicAttribution::Cited,
            classes: CoiClass::ALL.into_iter().filter(|c| c.is_coi()).collect(),
        }
    }
}

/// `I_A = Σ_i share(i, A) · S(i)`.
pub fn scholar_impact(scores: &[f64], credit: &CreditTable, corpus: &Corpus) -> Vec<f64> {
    let mut impact = vec![0.0; corpus.author_count()];
    for p in corpus.paper_indices() {
        for &(a, share) in credit.shares(p) {
            impact[a.index()] += share * scores[p.index()];
        }
    }
    impact
}

/// Institution impact; each author's credit on a paper goes to the primary
/// (first-listed) affiliation of that author's mention on that paper.
#[derive(Debug, Clone, Default, PartialEq)]
pub struct InstitutionImpact {
    pub by_institution: Vec<f64>,
    /// Credit of mentions with no affiliation.
    pub unknown: f64,
}

pub fn institution_impact(scores: &[f64], credit: &CreditTable, corpus: &Corpus) -> InstitutionImpact {
    let mut out = InstitutionImpact { by_institution: vec![0.0; corpus.institutions().len()], unknown: 0.0 };
    for p in corpus.paper_indices() {
        let paper = corpus.paper(p);
        for m in &paper.authors {
            let contribution = credit.share(p, m.author) * scores[p.index()];
            match m.primary_institution() {
                Some(inst) => out.by_institution[inst.index()] += contribution,
                None => out.unknown += contribution,
            }
        }
    }
    out
}

/// Country impact as the sum of its institutions' impact; institutions with
/// no country are reported under `None`.
pub fn country_impact(institutions: &InstitutionImpact, corpus: &Corpus) -> BTreeMap<Option<String>, f64> {
    let mut out = BTreeMap::new();
    for (i, &v) in institutions.by_institution.iter().enumerate() {
        let country = corpus.institutions()[i].country.clone();
        *out.entry(country).or_insert(0.0) += v;
    }
    out
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct InstitutionStats {
    pub key: String,
    pub country: Option<String>,
    /// Distinct authors listing the institution on any paper.
    pub size: usize,
    /// Papers with at least one author whose primary affiliation is here.
    pub papers: usize,
    pub coic: usize,
    pub impact: f64,
}

#[derive(Debug, Clone, Default, PartialEq, Serialize)]
pub struct CountryStats {
    pub key: Option<String>,
    pub size: usize,
    pub papers: usize,
    /// Sum of member institutions' COI citation counts.
    pub coic: usize,
    pub impact: f64,
}

fn ratio(num: f64, den: usize) -> f64 {
    if den == 0 { 0.0 } else { num / den as f64 }
}

impl InstitutionStats {
    pub fn coic_per_author(&self) -> f64 {
        ratio(self.coic as f64, self.size)
    }
    pub fn coic_per_paper(&self) -> f64 {
        ratio(self.coic as f64, self.papers)
    }
    pub fn impact_per_author(&self) -> f64 {
        ratio(self.impact, self.size)
    }
    pub fn impact_per_paper(&self) -> f64 {
        ratio(self.impact, self.papers)
    }
}

impl CountryStats {
    pub fn coic_per_author(&self) -> f64 {
        ratio(self.coic as f64, self.size)
    }
    pub fn coic_per_paper(&self) -> f64 {
        ratio(self.coic as f64, self.papers)
    }
    pub fn impact_per_author(&self) -> f64 {
        ratio(self.impact, self.size)
    }
    pub fn impact_per_paper(&self) -> f64 {
        ratio(self.impact, self.papers)
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct ImpactReport {
    pub scholars: Vec<f64>,
    pub institutions: Vec<InstitutionStats>,
    /// Impact of author mentions without any affiliation.
    pub unknown_institution_impact: f64,
    /// COI citations landing on papers whose relevant side has no affiliation.
    pub unknown_institution_coic: usize,
    pub countries: Vec<CountryStats>,
    /// country -> year -> COI citations (bucketed by citing year).
    pub yearly_coic: BTreeMap<Option<String>, BTreeMap<i32, usize>>,
    /// country -> year -> impact of papers published that year.
    pub yearly_impact: BTreeMap<Option<String>, BTreeMap<i32, f64>>,
}

/// Primary institutions of `p`'s authors.
fn primary_institutions(corpus: &Corpus, p: PaperIdx) -> BTreeSet<InstId> {
    corpus.paper(p).authors.iter().filter_map(|m| m.primary_institution()).collect()
}

/// Build the full report from converged scores and classified edges.
pub fn aggregate(
    corpus: &Corpus,
    scores: &[f64],
    credit: &CreditTable,
    edges: &[WeightedEdge],
    options: &CoicOptions,
) -> ImpactReport {
    let n_inst = corpus.institutions().len();
    let scholars = scholar_impact(scores, credit, corpus);
    let inst_impact = institution_impact(scores, credit, corpus);

    let mut members: Vec<BTreeSet<AuthorId>> = vec![BTreeSet::new(); n_inst];
    let mut primaries: Vec<BTreeSet<InstId>> = Vec::with_capacity(corpus.len());
    let mut inst_papers = vec![0usize; n_inst];
    for p in corpus.paper_indices() {
        for m in &corpus.paper(p).authors {
            for &inst in &m.affiliations {
                members[inst.index()].insert(m.author);
            }
        }
        let prim = primary_institutions(corpus, p);
        for inst in &prim {
            inst_papers[inst.index()] += 1;
        }
        primaries.push(prim);
    }

    let country_of = |inst: InstId| corpus.institution(inst).country.clone();

    // COI citations per institution, and per (country, citing year).
    let mut coic = vec![0usize; n_inst];
    let mut unknown_coic = 0usize;
    let mut yearly_coic: BTreeMap<Option<String>, BTreeMap<i32, usize>> = BTreeMap::new();
    for e in edges.iter().filter(|e| options.classes.contains(&e.class)) {
        let mut targets: BTreeSet<InstId> = BTreeSet::new();
        let mut sides_without = 0;
        let sides: &[PaperIdx] = match options.attribution {
            CoicAttribution::Cited => &[e.cited],
            CoicAttribution::Citing => &[e.citing],
            CoicAttribution::Both => &[e.cited, e.citing],
        };
        for &side in sides {
            let prim = &primaries[side.index()];
            if prim.is_empty() {
                sides_without += 1;
            }
            targets.extend(prim.iter().copied());
        }
        unknown_coic += sides_without;
        let year = corpus.paper(e.citing).year;
        for inst in targets {
            coic[inst.index()] += 1;
            *yearly_coic.entry(country_of(inst)).or_default().entry(year).or_default() += 1;
        }
    }

    let institutions: Vec<InstitutionStats> = (0..n_inst)
        .map(|i| InstitutionStats {
            key: corpus.institutions()[i].key.clone(),
            country: corpus.institutions()[i].country.clone(),
            size: members[i].len(),
            papers: inst_papers[i],
            coic: coic[i],
            impact: inst_impact.by_institution[i],
        })
        .collect();

    let mut countries: BTreeMap<Option<String>, CountryStats> = BTreeMap::new();
    let mut country_members: BTreeMap<Option<String>, BTreeSet<AuthorId>> = BTreeMap::new();
    let mut country_papers: BTreeMap<Option<String>, BTreeSet<PaperIdx>> = BTreeMap::new();
    for (i, stats) in institutions.iter().enumerate() {
        let entry = countries
            .entry(stats.country.clone())
            .or_insert_with(|| CountryStats { key: stats.country.clone(), ..Default::default() });
        entry.coic += stats.coic;
        entry.impact += stats.impact;
        country_members.entry(stats.country.clone()).or_default().extend(members[i].iter().copied());
    }
    let mut yearly_impact: BTreeMap<Option<String>, BTreeMap<i32, f64>> = BTreeMap::new();
    for p in corpus.paper_indices() {
        let paper = corpus.paper(p);
        for inst in &primaries[p.index()] {
            country_papers.entry(country_of(*inst)).or_default().insert(p);
        }
        for m in &paper.authors {
            if let Some(inst) = m.primary_institution() {
                let contribution = credit.share(p, m.author) * scores[p.index()];
                *yearly_impact.entry(country_of(inst)).or_default().entry(paper.year).or_default() +=
                    contribution;
            }
        }
    }
    for (key, stats) in countries.iter_mut() {
        stats.size = country_members.get(key).map_or(0, BTreeSet::len);
        stats.papers = country_papers.get(key).map_or(0, BTreeSet::len);
    }

    ImpactReport {
        scholars,
        institutions,
        unknown_institution_impact: inst_impact.unknown,
        unknown_institution_coic: unknown_coic,
        countries: countries.into_values().collect(),
        yearly_coic,
        yearly_impact,
    }
}

fn label(key: &Option<String>) -> &str {
    key.as_deref().unwrap_or(UNKNOWN)
}

impl ImpactReport {
    /// `author_key,impact`
    pub fn write_scholars<W: Write>(&self, corpus: &Corpus, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["author_key", "impact"])?;
        for (a, v) in self.scholars.iter().enumerate() {
            w.write_record([corpus.author_key(AuthorId::from_index(a)), &v.to_string()])?;
        }
        w.flush()?;
        Ok(())
    }

    /// `key,country,A_m,P_m,COIC,I_I` followed by the per-author and
    /// per-paper ratios. The final row carries unattributed mass.
    pub fn write_institutions<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record([
            "key", "country", "A_m", "P_m", "COIC", "I_I", "COIC_per_A", "COIC_per_P", "I_per_A", "I_per_P",
        ])?;
        for s in &self.institutions {
            w.write_record([
                s.key.clone(),
                label(&s.country).to_string(),
                s.size.to_string(),
                s.papers.to_string(),
                s.coic.to_string(),
                s.impact.to_string(),
                s.coic_per_author().to_string(),
                s.coic_per_paper().to_string(),
                s.impact_per_author().to_string(),
                s.impact_per_paper().to_string(),
            ])?;
        }
        w.write_record([
            UNKNOWN.to_string(),
            UNKNOWN.to_string(),
            String::new(),
            String::new(),
            self.unknown_institution_coic.to_string(),
            self.unknown_institution_impact.to_string(),
            String::new(),
            String::new(),
            String::new(),
            String::new(),
        ])?;
        w.flush()?;
        Ok(())
    }

    /// `key,A_n,P_n,COIC,I_C` followed by ratios.
    pub fn write_countries<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["key", "A_n", "P_n", "COIC", "I_C", "COIC_per_A", "COIC_per_P", "I_per_A", "I_per_P"])?;
        for s in &self.countries {
            w.write_record([
                label(&s.key).to_string(),
                s.size.to_string(),
                s.papers.to_string(),
                s.coic.to_string(),
                s.impact.to_string(),
                s.coic_per_author().to_string(),
                s.coic_per_paper().to_string(),
                s.impact_per_author().to_string(),
                s.impact_per_paper().to_string(),
            ])?;
        }
        w.flush()?;
        Ok(())
    }

    /// `country,year,coic`
    pub fn write_yearly_coic<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["country", "year", "coic"])?;
        for (country, years) in &self.yearly_coic {
            for (year, n) in years {
                w.write_record([label(country), &year.to_string(), &n.to_string()])?;
            }
        }
        w.flush()?;
        Ok(())
    }

    /// `country,year,impact`
    pub fn write_yearly_impact<W: Write>(&self, out: W) -> csv::Result<()> {
        let mut w = csv::Writer::from_writer(out);
        w.write_record(["country", "year", "impact"])?;
        for (country, years) in &self.yearly_impact {
            for (year, v) in years {
                w.write_record([label(country), &year.to_string(), &v.to_string()])?;
            }
        }
        w.flush()?;
        Ok(())
    }
}
