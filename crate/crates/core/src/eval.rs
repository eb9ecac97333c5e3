//! Batch evaluation: dataset filtering, per-query rank comparison,
//! improved/worsened/preserved classification, quartile summaries,
//! Mann-Whitney U tests and report emission.

use std::collections::BTreeSet;
use std::fmt::{self, Write as _};
use std::fs;
use std::path::Path;

use rayon::prelude::*;
use serde::Serialize;
use statrs::function::erf::erfc;

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::reformulate::{preprocessed_baseline, Mode, QueryRecord, Reformulation, Reformulator, Strategy};
use crate::rocchio::{rocchio_expand, RocchioConfig};
use crate::search::{rank_of_first_relevant, search_terms, Rank, SearchOptions};
use crate::textprep::{preprocess, SplitMode, StopList};

/// Queries whose baseline already ranks a relevant document this high or
/// better need no reformulation.
pub const GOOD_RANK: usize = 10;

/// Parses a queries file: `query_id<TAB>title<TAB>gold1;gold2;...`.
pub fn parse_queries(text: &str, path: &Path) -> Result<Vec<QueryRecord>> {
    let mut queries = Vec::new();
    for (idx, line) in text.lines().enumerate() {
        let line = line.trim_end_matches('\r');
        if line.trim().is_empty() {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        let [id, title, gold] = fields[..] else {
            return Err(Error::parse(path, idx + 1, "expected 3 tab-separated fields"));
        };
        queries.push(QueryRecord {
            query_id: id.trim().to_owned(),
            text: title.to_owned(),
            gold_docs: gold
                .split(';')
                .map(str::trim)
                .filter(|g| !g.is_empty())
                .map(str::to_owned)
                .collect(),
        });
    }
    Ok(queries)
}

pub fn read_queries(path: impl AsRef<Path>) -> Result<Vec<QueryRecord>> {
    let path = path.as_ref();
    let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
    parse_queries(&text, path)
}

/// Rank of the first gold document for the verbatim title. The title is only
/// tokenized, camel-split and lower-cased, as a search engine's analyzer
/// would; no stop words are removed.
pub fn baseline_rank(q: &QueryRecord, corpus: &Corpus) -> Result<Rank> {
    let seq = preprocess(&q.text, &StopList::empty(), SplitMode::SplitAndKeepWhole);
    let hits = search_terms(corpus, seq.normalized(), SearchOptions::all())?;
    rank_of_first_relevant(&hits, &q.gold_docs)
}

pub fn reformulated_rank(r: &Reformulation, corpus: &Corpus, gold: &BTreeSet<String>) -> Result<Rank> {
    let hits = search_terms(corpus, r.search_terms(), SearchOptions::all())?;
    rank_of_first_relevant(&hits, gold)
}

fn check_gold(queries: &[QueryRecord]) -> Result<()> {
    let missing: Vec<String> = queries
        .iter()
        .filter(|q| q.gold_docs.is_empty())
        .map(|q| q.query_id.clone())
        .collect();
    if missing.is_empty() {
        Ok(())
    } else {
        Err(Error::EmptyGold(missing))
    }
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct DatasetFilter {
    /// Queries whose baseline rank is worse than [`GOOD_RANK`].
    pub kept: Vec<QueryRecord>,
    pub already_good: Vec<String>,
    pub not_retrieved: Vec<String>,
}

/// Keeps the queries that need reformulation: baseline retrieves a relevant
/// document, but below rank [`GOOD_RANK`].
pub fn filter_dataset(queries: &[QueryRecord], corpus: &Corpus) -> Result<DatasetFilter> {
    check_gold(queries)?;
    let ranks: Vec<Rank> = queries
        .par_iter()
        .map(|q| baseline_rank(q, corpus))
        .collect::<Result<_>>()?;
    let mut out = DatasetFilter::default();
    for (q, rank) in queries.iter().zip(ranks) {
        match rank {
            Rank::At(r) if r > GOOD_RANK => out.kept.push(q.clone()),
            Rank::At(_) => out.already_good.push(q.query_id.clone()),
            Rank::NotRetrieved => out.not_retrieved.push(q.query_id.clone()),
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Classification {
    Improved,
    Worsened,
    Preserved,
    Excluded,
}

impl Classification {
    pub const ALL: [Classification; 4] = [
        Classification::Improved,
        Classification::Worsened,
        Classification::Preserved,
        Classification::Excluded,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Classification::Improved => "improved",
            Classification::Worsened => "worsened",
            Classification::Preserved => "preserved",
            Classification::Excluded => "excluded",
        }
    }
}

impl fmt::Display for Classification {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

pub fn classify(baseline: Rank, reformulated: Rank) -> Classification {
    match (baseline, reformulated) {
        (Rank::At(b), Rank::At(r)) if r < b => Classification::Improved,
        (Rank::At(b), Rank::At(r)) if r > b => Classification::Worsened,
        (Rank::At(_), Rank::At(_)) => Classification::Preserved,
        _ => Classification::Excluded,
    }
}

fn serialize_rank<S: serde::Serializer>(rank: &Rank, s: S) -> std::result::Result<S::Ok, S::Error> {
    match rank {
        Rank::At(r) => s.serialize_u64(*r as u64),
        Rank::NotRetrieved => s.serialize_none(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct EvalOutcome {
    pub query_id: String,
    #[serde(serialize_with = "serialize_rank")]
    pub baseline_rank: Rank,
    #[serde(serialize_with = "serialize_rank")]
    pub reformulated_rank: Rank,
    pub classification: Classification,
    /// Why the query was excluded, or which variant was used.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

/// Summary statistics of the reformulated ranks in one bucket.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankSummary {
    pub count: usize,
    pub mean: f64,
    pub q1: f64,
    pub q2: f64,
    pub q3: f64,
    pub min: usize,
    pub max: usize,
}

/// Quantile by linear interpolation between closest ranks of a sorted slice.
pub fn quantile(sorted: &[f64], p: f64) -> f64 {
    let h = (sorted.len() - 1) as f64 * p;
    let lo = h.floor() as usize;
    let hi = h.ceil() as usize;
    sorted[lo] + (h - lo as f64) * (sorted[hi] - sorted[lo])
}

pub fn summarize(ranks: &[usize]) -> Option<RankSummary> {
    if ranks.is_empty() {
        return None;
    }
    let mut sorted: Vec<f64> = ranks.iter().map(|&r| r as f64).collect();
    sorted.sort_by(f64::total_cmp);
    Some(RankSummary {
        count: ranks.len(),
        mean: sorted.iter().sum::<f64>() / sorted.len() as f64,
        q1: quantile(&sorted, 0.25),
        q2: quantile(&sorted, 0.5),
        q3: quantile(&sorted, 0.75),
        min: *ranks.iter().min()?,
        max: *ranks.iter().max()?,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MwuResult {
    /// The smaller of the two U statistics.
    pub u_statistic: f64,
    /// Two-sided p-value from the normal approximation.
    pub p_value: f64,
    /// `mean(a) - mean(b)`; negative when `a` ranks closer to the top.
    pub mean_rank_difference: f64,
    pub n_a: usize,
    pub n_b: usize,
    /// Either sample has fewer than 8 values; the normal approximation is
    /// coarse there.
    pub small_sample: bool,
}

/// Average ranks (1-based) of `values`, ties sharing the mean of their
/// positions. Also returns the tie-correction sum of `t^3 - t`.
fn average_ranks(values: &[f64]) -> (Vec<f64>, f64) {
    let mut order: Vec<usize> = (0..values.len()).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]));
    let mut ranks = vec![0.0; values.len()];
    let mut ties = 0.0;
    let mut i = 0;
    while i < order.len() {
        let mut j = i;
        while j + 1 < order.len() && values[order[j + 1]] == values[order[i]] {
            j += 1;
        }
        let avg = (i + j) as f64 / 2.0 + 1.0;
        for &idx in &order[i..=j] {
            ranks[idx] = avg;
        }
        let t = (j - i + 1) as f64;
        ties += t * t * t - t;
        i = j + 1;
    }
    (ranks, ties)
}

/// Two-sided Mann-Whitney U test with tie and continuity corrections.
pub fn mann_whitney_u(a: &[f64], b: &[f64]) -> Result<MwuResult> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::EmptySample);
    }
    let (n1, n2) = (a.len() as f64, b.len() as f64);
    let n = n1 + n2;
    let pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    let (ranks, ties) = average_ranks(&pooled);
    let rank_sum_a: f64 = ranks[..a.len()].iter().sum();
    let u_a = rank_sum_a - n1 * (n1 + 1.0) / 2.0;
    let u_b = n1 * n2 - u_a;
    let mean_u = n1 * n2 / 2.0;
    let variance = n1 * n2 / 12.0 * ((n + 1.0) - ties / (n * (n - 1.0)));
    let p_value = if variance <= 0.0 {
        1.0
    } else {
        let z = ((u_a - mean_u).abs() - 0.5).max(0.0) / variance.sqrt();
        erfc(z / std::f64::consts::SQRT_2).min(1.0)
    };
    let mean = |xs: &[f64]| xs.iter().sum::<f64>() / xs.len() as f64;
    Ok(MwuResult {
        u_statistic: u_a.min(u_b),
        p_value,
        mean_rank_difference: mean(a) - mean(b),
        n_a: a.len(),
        n_b: b.len(),
        small_sample: a.len() < 8 || b.len() < 8,
    })
}

/// Everything one strategy produced over the evaluated queries, sorted by
/// query id.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct StrategyRun {
    pub strategy: Strategy,
    pub outcomes: Vec<EvalOutcome>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
pub struct BucketCounts {
    pub improved: usize,
    pub worsened: usize,
    pub preserved: usize,
    pub excluded: usize,
}

impl BucketCounts {
    pub fn total(&self) -> usize {
        self.improved + self.worsened + self.preserved + self.excluded
    }

    pub fn get(&self, c: Classification) -> usize {
        match c {
            Classification::Improved => self.improved,
            Classification::Worsened => self.worsened,
            Classification::Preserved => self.preserved,
            Classification::Excluded => self.excluded,
        }
    }

    /// Denominator for percentages: every query, or only the non-excluded
    /// ones in strict mode.
    pub fn denominator(&self, strict: bool) -> usize {
        if strict {
            self.total() - self.excluded
        } else {
            self.total()
        }
    }

    pub fn percent(&self, c: Classification, strict: bool) -> Option<f64> {
        let denom = self.denominator(strict);
        if denom == 0 || (strict && c == Classification::Excluded) {
            return None;
        }
        Some(100.0 * self.get(c) as f64 / denom as f64)
    }
}

impl StrategyRun {
    pub fn counts(&self) -> BucketCounts {
        let mut counts = BucketCounts::default();
        for o in &self.outcomes {
            match o.classification {
                Classification::Improved => counts.improved += 1,
                Classification::Worsened => counts.worsened += 1,
                Classification::Preserved => counts.preserved += 1,
                Classification::Excluded => counts.excluded += 1,
            }
        }
        counts
    }

    pub fn bucket_ranks(&self, c: Classification) -> Vec<usize> {
        self.outcomes
            .iter()
            .filter(|o| o.classification == c)
            .filter_map(|o| o.reformulated_rank.position())
            .collect()
    }

    pub fn summary(&self, c: Classification) -> Option<RankSummary> {
        summarize(&self.bucket_ranks(c))
    }

    /// Reformulated ranks of every query that retrieved a relevant document.
    pub fn retrieved_ranks(&self) -> Vec<f64> {
        self.outcomes
            .iter()
            .filter_map(|o| o.reformulated_rank.position())
            .map(|r| r as f64)
            .collect()
    }
}

/// Runs strategies over queries and compares against the verbatim baseline.
pub struct Evaluator<'a> {
    pub reformulator: Reformulator<'a>,
    pub rocchio: RocchioConfig,
    /// Use the reduction-only query for the full strategy whenever it
    /// already beats the baseline.
    pub skip_expansion_when_reduction_improves: bool,
}

impl<'a> Evaluator<'a> {
    pub fn new(reformulator: Reformulator<'a>) -> Self {
        let cfg = reformulator.config;
        Evaluator {
            reformulator,
            rocchio: RocchioConfig {
                top_docs: cfg.top_docs,
                expansion_count: None,
                budget: cfg.budget,
            },
            skip_expansion_when_reduction_improves: true,
        }
    }

    fn corpus(&self) -> &Corpus {
        self.reformulator.corpus
    }

    pub fn reformulate(&self, q: &QueryRecord, strategy: Strategy) -> Result<Reformulation> {
        match strategy {
            Strategy::Quickar(mode) => self.reformulator.reformulate(q, mode),
            Strategy::Rocchio => rocchio_expand(q, self.corpus(), self.reformulator.stops, self.rocchio),
            Strategy::PreprocessedBaseline => preprocessed_baseline(q, self.reformulator.stops),
        }
    }

    pub fn evaluate_query(&self, q: &QueryRecord, strategy: Strategy) -> Result<EvalOutcome> {
        let baseline = baseline_rank(q, self.corpus())?;
        let outcome = |rank: Rank, note: Option<String>| EvalOutcome {
            query_id: q.query_id.clone(),
            baseline_rank: baseline,
            reformulated_rank: rank,
            classification: classify(baseline, rank),
            note,
        };
        let reformulation = match self.reformulate(q, strategy) {
            Ok(r) => r,
            Err(Error::QueryEmpty { .. }) => {
                let mut o = outcome(Rank::NotRetrieved, Some("query empty after preprocessing".into()));
                o.classification = Classification::Excluded;
                return Ok(o);
            }
            Err(e) => return Err(e),
        };
        if strategy == Strategy::Quickar(Mode::All) && self.skip_expansion_when_reduction_improves {
            let reduced = self.reformulator.reformulate(q, Mode::ReductionOnly)?;
            let red_rank = reformulated_rank(&reduced, self.corpus(), &q.gold_docs)?;
            if classify(baseline, red_rank) == Classification::Improved {
                return Ok(outcome(red_rank, Some("reduction only".into())));
            }
        }
        let rank = reformulated_rank(&reformulation, self.corpus(), &q.gold_docs)?;
        let note = (!rank.is_retrieved()).then(|| String::from("not retrieved"));
        Ok(outcome(rank, note))
    }

    pub fn evaluate(&self, queries: &[QueryRecord], strategy: Strategy) -> Result<StrategyRun> {
        check_gold(queries)?;
        let mut outcomes: Vec<EvalOutcome> = queries
            .par_iter()
            .map(|q| self.evaluate_query(q, strategy))
            .collect::<Result<_>>()?;
        outcomes.sort_by(|a, b| a.query_id.cmp(&b.query_id));
        Ok(StrategyRun { strategy, outcomes })
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MwuRow {
    pub a: Strategy,
    pub b: Strategy,
    pub result: Option<MwuResult>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DatasetStats {
    pub total: usize,
    pub evaluated: usize,
    pub already_good: Vec<String>,
    pub not_retrieved: Vec<String>,
}

/// A complete evaluation run over several strategies.
#[derive(Debug, Clone, PartialEq)]
pub struct EvalReport {
    pub dataset: DatasetStats,
    pub strict: bool,
    pub runs: Vec<StrategyRun>,
    pub tests: Vec<MwuRow>,
}

/// Filters the dataset, evaluates every strategy on the kept queries, and
/// tests the first strategy's ranks against each of the others.
pub fn run_evaluation(
    evaluator: &Evaluator<'_>,
    queries: &[QueryRecord],
    strategies: &[Strategy],
    strict: bool,
) -> Result<EvalReport> {
    let filtered = filter_dataset(queries, evaluator.corpus())?;
    let runs = strategies
        .iter()
        .map(|&s| evaluator.evaluate(&filtered.kept, s))
        .collect::<Result<Vec<_>>>()?;
    let mut tests = Vec::new();
    if let Some((first, rest)) = runs.split_first() {
        let a = first.retrieved_ranks();
        for other in rest {
            let b = other.retrieved_ranks();
            tests.push(MwuRow {
                a: first.strategy,
                b: other.strategy,
                result: mann_whitney_u(&a, &b).ok(),
            });
        }
    }
    Ok(EvalReport {
        dataset: DatasetStats {
            total: queries.len(),
            evaluated: filtered.kept.len(),
            already_good: filtered.already_good,
            not_retrieved: filtered.not_retrieved,
        },
        strict,
        runs,
        tests,
    })
}

#[derive(Serialize)]
struct JsonBucket {
    count: usize,
    percent: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ranks: Option<RankSummary>,
}

#[derive(Serialize)]
struct JsonRun<'a> {
    strategy: Strategy,
    queries: usize,
    improved: JsonBucket,
    worsened: JsonBucket,
    preserved: JsonBucket,
    excluded: JsonBucket,
    outcomes: &'a [EvalOutcome],
}

#[derive(Serialize)]
struct JsonReport<'a> {
    dataset: &'a DatasetStats,
    strict: bool,
    runs: Vec<JsonRun<'a>>,
    tests: &'a [MwuRow],
}

impl EvalReport {
    pub fn to_json(&self) -> String {
        let runs = self
            .runs
            .iter()
            .map(|run| {
                let counts = run.counts();
                let bucket = |c: Classification| JsonBucket {
                    count: counts.get(c),
                    percent: counts.percent(c, self.strict),
                    ranks: if c == Classification::Excluded {
                        None
                    } else {
                        run.summary(c)
                    },
                };
                JsonRun {
                    strategy: run.strategy,
                    queries: counts.total(),
                    improved: bucket(Classification::Improved),
                    worsened: bucket(Classification::Worsened),
                    preserved: bucket(Classification::Preserved),
                    excluded: bucket(Classification::Excluded),
                    outcomes: &run.outcomes,
                }
            })
            .collect();
        let report = JsonReport {
            dataset: &self.dataset,
            strict: self.strict,
            runs,
            tests: &self.tests,
        };
        let mut json = serde_json::to_string_pretty(&report).unwrap_or_default();
        json.push('\n');
        json
    }

    /// Aligned plain-text tables: bucket counts, rank summaries, rank tests.
    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let d = &self.dataset;
        let _ = writeln!(
            out,
            "queries: {} total, {} evaluated (baseline rank > {GOOD_RANK}), {} already in top {GOOD_RANK}, {} not retrieved",
            d.total,
            d.evaluated,
            d.already_good.len(),
            d.not_retrieved.len()
        );
        let _ = writeln!(
            out,
            "percentages over: {}",
            if self.strict {
                "non-excluded queries"
            } else {
                "all evaluated queries"
            }
        );
        out.push('\n');

        let _ = writeln!(
            out,
            "{:<10} {:>7}  {:>16}  {:>16}  {:>16}  {:>16}",
            "strategy", "queries", "improved", "worsened", "preserved", "excluded"
        );
        for run in &self.runs {
            let counts = run.counts();
            let cell = |c: Classification| match counts.percent(c, self.strict) {
                Some(p) => format!("{} ({p:.2}%)", counts.get(c)),
                None => counts.get(c).to_string(),
            };
            let _ = writeln!(
                out,
                "{:<10} {:>7}  {:>16}  {:>16}  {:>16}  {:>16}",
                run.strategy.name(),
                counts.total(),
                cell(Classification::Improved),
                cell(Classification::Worsened),
                cell(Classification::Preserved),
                cell(Classification::Excluded)
            );
        }
        out.push('\n');

        let _ = writeln!(out, "reformulated rank of the first relevant document");
        let _ = writeln!(
            out,
            "{:<10} {:<10} {:>5} {:>9} {:>8} {:>8} {:>8} {:>6} {:>6}",
            "strategy", "bucket", "count", "mean", "q1", "q2", "q3", "min", "max"
        );
        for run in &self.runs {
            for c in &Classification::ALL[..3] {
                let Some(s) = run.summary(*c) else { continue };
                let _ = writeln!(
                    out,
                    "{:<10} {:<10} {:>5} {:>9.2} {:>8.2} {:>8.2} {:>8.2} {:>6} {:>6}",
                    run.strategy.name(),
                    c.name(),
                    s.count,
                    s.mean,
                    s.q1,
                    s.q2,
                    s.q3,
                    s.min,
                    s.max
                );
            }
        }

        if !self.tests.is_empty() {
            out.push('\n');
            let _ = writeln!(out, "mann-whitney u tests (two-sided, normal approximation)");
            let _ = writeln!(
                out,
                "{:<22} {:>9} {:>9} {:>10} {:>5} {:>5}",
                "pair", "u", "p-value", "mrd", "n_a", "n_b"
            );
            for row in &self.tests {
                let pair = format!("{} vs {}", row.a, row.b);
                match &row.result {
                    Some(r) => {
                        let _ = writeln!(
                            out,
                            "{:<22} {:>9.1} {:>9.4} {:>10.2} {:>5} {:>5}",
                            pair, r.u_statistic, r.p_value, r.mean_rank_difference, r.n_a, r.n_b
                        );
                    }
                    None => {
                        let _ = writeln!(out, "{pair:<22} {:>9}", "n/a");
                    }
                }
            }
        }
        out
    }

    /// One line per strategy and query.
    pub fn outcomes_tsv(&self) -> String {
        let mut out = String::from("strategy\tquery_id\tbaseline_rank\treformulated_rank\tclassification\tnote\n");
        for run in &self.runs {
            for o in &run.outcomes {
                let _ = writeln!(
                    out,
                    "{}\t{}\t{}\t{}\t{}\t{}",
                    run.strategy,
                    o.query_id,
                    o.baseline_rank,
                    o.reformulated_rank,
                    o.classification,
                    o.note.as_deref().unwrap_or("")
                );
            }
        }
        out
    }
}

pub const REPORT_JSON: &str = "report.json";
pub const REPORT_TEXT: &str = "report.txt";
pub const OUTCOMES_TSV: &str = "outcomes.tsv";

/// Writes `report.json`, `report.txt` and `outcomes.tsv` into `dir`.
pub fn emit_report(report: &EvalReport, dir: impl AsRef<Path>) -> Result<()> {
    let dir = dir.as_ref();
    fs::create_dir_all(dir).map_err(|e| Error::io(dir, e))?;
    for (name, body) in [
        (REPORT_JSON, report.to_json()),
        (REPORT_TEXT, report.to_text()),
        (OUTCOMES_TSV, report.outcomes_tsv()),
    ] {
        let path = dir.join(name);
        fs::write(&path, body).map_err(|e| Error::io(&path, e))?;
    }
    Ok(())
}
