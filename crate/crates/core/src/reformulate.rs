//! Query reformulation with crowd knowledge.
//!
//! Given a change-request title, the reformulator
//!
//! 1. collects keywords from the title and reduces them to nominal terms that
//!    occur in at most a quarter of the corpus documents,
//! 2. harvests expansion candidates from the top retrieved methods of the
//!    project and from the adjacency lists of the keywords,
//! 3. scores project candidates by the summed cosine similarity of their
//!    adjacency vectors with the keywords' vectors, and crowd candidates by
//!    their summed co-occurrence counts with the keywords,
//! 4. keeps the top nominal candidates of each list, merges them, and fills the
//!    query up to the term budget.
//!
//! Compound identifiers are rendered both split and whole in the final query.

use std::collections::{BTreeSet, HashSet};
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::adjacency::AdjacencyDatabase;
use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::search::{search_terms, SearchOptions};
use crate::textprep::{
    preprocess_with_id, split_camel, Origin, SplitMode, StopList, TermSequence, Token, WordList,
};

const NON_NOUNS: &str = include_str!("../data/non_nouns.txt");
const NOMINAL_EXCEPTIONS: &str = include_str!("../data/nominal_exceptions.txt");

/// A change request used as a search query.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct QueryRecord {
    pub query_id: String,
    /// The title, used verbatim as the baseline query.
    pub text: String,
    /// Relevant documents, only needed for evaluation.
    pub gold_docs: BTreeSet<String>,
}

impl QueryRecord {
    pub fn new(query_id: impl Into<String>, text: impl Into<String>) -> Self {
        QueryRecord {
            query_id: query_id.into(),
            text: text.into(),
            gold_docs: BTreeSet::new(),
        }
    }
}

/// What the noun oracle gets to see about a term.
#[derive(Debug, Clone, Copy)]
pub struct TermInfo<'a> {
    pub normalized: &'a str,
    pub surface: &'a str,
    /// The term is a camel-case part or a compound identifier.
    pub from_identifier: bool,
}

/// Decides whether a term is nominal (noun-like).
pub trait NounOracle: Send + Sync {
    fn is_nominal(&self, term: &TermInfo<'_>) -> bool;
}

/// Lexicon-driven noun oracle. Identifier-derived terms are nominal; other
/// words are rejected when listed as verbs, adjectives or adverbs, or when
/// they end in `-ing`/`-ed` and are not listed as exceptions.
#[derive(Debug, Clone)]
pub struct LexiconNounOracle {
    non_nouns: WordList,
    exceptions: WordList,
}

impl Default for LexiconNounOracle {
    fn default() -> Self {
        LexiconNounOracle {
            non_nouns: WordList::parse(NON_NOUNS, "<bundled:non_nouns.txt>"),
            exceptions: WordList::parse(NOMINAL_EXCEPTIONS, "<bundled:nominal_exceptions.txt>"),
        }
    }
}

impl LexiconNounOracle {
    pub fn new(non_nouns: WordList, exceptions: WordList) -> Self {
        LexiconNounOracle {
            non_nouns,
            exceptions,
        }
    }
}

impl NounOracle for LexiconNounOracle {
    fn is_nominal(&self, term: &TermInfo<'_>) -> bool {
        if term.from_identifier {
            return true;
        }
        let word = term.normalized;
        if self.non_nouns.contains(word) {
            return false;
        }
        let inflected = word.chars().count() > 4 && (word.ends_with("ing") || word.ends_with("ed"));
        !inflected || self.exceptions.contains(word)
    }
}

/// Accepts every term. Useful to switch the nominal filter off.
#[derive(Debug, Clone, Copy, Default)]
pub struct AllNominal;

impl NounOracle for AllNominal {
    fn is_nominal(&self, _: &TermInfo<'_>) -> bool {
        true
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Keyword {
    pub term: String,
    pub surface: String,
    #[serde(skip)]
    pub from_identifier: bool,
}

impl Keyword {
    pub fn info(&self) -> TermInfo<'_> {
        TermInfo {
            normalized: &self.term,
            surface: &self.surface,
            from_identifier: self.from_identifier,
        }
    }
}

/// Ordered, duplicate-free keywords of a query.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize)]
#[serde(transparent)]
pub struct KeywordSet {
    pub keywords: Vec<Keyword>,
}

impl KeywordSet {
    pub fn len(&self) -> usize {
        self.keywords.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keywords.is_empty()
    }

    pub fn contains(&self, term: &str) -> bool {
        self.keywords.iter().any(|k| k.term == term)
    }

    pub fn terms(&self) -> impl Iterator<Item = &str> {
        self.keywords.iter().map(|k| k.term.as_str())
    }

    fn term_set(&self) -> HashSet<&str> {
        self.terms().collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Source {
    Project,
    Crowd,
}

impl fmt::Display for Source {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Source::Project => "project",
            Source::Crowd => "crowd",
        })
    }
}

/// An expansion candidate and its accumulated relevance.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct CandidateScore {
    pub term: String,
    pub surface: String,
    pub source: Source,
    pub score: f64,
    #[serde(skip)]
    pub from_identifier: bool,
}

impl CandidateScore {
    pub fn info(&self) -> TermInfo<'_> {
        TermInfo {
            normalized: &self.term,
            surface: &self.surface,
            from_identifier: self.from_identifier,
        }
    }
}

/// A term appended to the query.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Expansion {
    pub term: String,
    pub surface: String,
    pub source: Source,
    /// Raw score within its source list.
    pub score: f64,
    /// Min-max normalized score used for merging.
    pub normalized: f64,
    #[serde(skip)]
    pub from_identifier: bool,
}

impl Expansion {
    pub fn info(&self) -> TermInfo<'_> {
        TermInfo {
            normalized: &self.term,
            surface: &self.surface,
            from_identifier: self.from_identifier,
        }
    }
}

/// Which candidate sources feed the expansion.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Mode {
    All,
    ProjectOnly,
    CrowdOnly,
    ReductionOnly,
}

impl Mode {
    pub fn uses_project(self) -> bool {
        matches!(self, Mode::All | Mode::ProjectOnly)
    }

    pub fn uses_crowd(self) -> bool {
        matches!(self, Mode::All | Mode::CrowdOnly)
    }
}

/// A reformulation technique, as named on the command line and in reports.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Strategy {
    Quickar(Mode),
    Rocchio,
    /// Stop-word-free, deduplicated title keywords with no reformulation.
    PreprocessedBaseline,
}

impl Strategy {
    pub const ALL: [Strategy; 6] = [
        Strategy::Quickar(Mode::All),
        Strategy::Quickar(Mode::ProjectOnly),
        Strategy::Quickar(Mode::CrowdOnly),
        Strategy::Quickar(Mode::ReductionOnly),
        Strategy::Rocchio,
        Strategy::PreprocessedBaseline,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Quickar(Mode::All) => "all",
            Strategy::Quickar(Mode::ProjectOnly) => "p",
            Strategy::Quickar(Mode::CrowdOnly) => "so",
            Strategy::Quickar(Mode::ReductionOnly) => "red",
            Strategy::Rocchio => "rocchio",
            Strategy::PreprocessedBaseline => "baseline",
        }
    }
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl Serialize for Strategy {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(self.name())
    }
}

impl FromStr for Strategy {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        Strategy::ALL
            .into_iter()
            .find(|st| st.name() == s.trim().to_lowercase())
            .ok_or_else(|| format!("unknown strategy {s:?} (expected all, p, so, red, rocchio or baseline)"))
    }
}

impl FromStr for Mode {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s.parse::<Strategy>() {
            Ok(Strategy::Quickar(mode)) => Ok(mode),
            _ => Err(format!("unknown mode {s:?} (expected all, p, so or red)")),
        }
    }
}

/// The outcome of reformulating one query.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Reformulation {
    pub query_id: String,
    pub strategy: Strategy,
    /// Keywords kept from the original query.
    pub reduced_keywords: KeywordSet,
    pub expansions: Vec<Expansion>,
    #[serde(skip)]
    pub rendered: TermSequence,
}

impl Reformulation {
    pub fn rendered_query(&self) -> String {
        self.rendered.render()
    }

    /// Normalized terms sent to the retriever.
    pub fn search_terms(&self) -> impl Iterator<Item = &str> {
        self.rendered.normalized()
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReformulatorConfig {
    /// Documents retrieved as the project candidate source.
    pub top_docs: usize,
    /// Candidates kept from each scored list.
    pub top_k: usize,
    /// Maximum number of terms in the reformulated query, before rendering.
    pub budget: usize,
    /// Keywords in a larger fraction of documents are dropped.
    pub max_df_ratio: f64,
}

impl Default for ReformulatorConfig {
    fn default() -> Self {
        ReformulatorConfig {
            top_docs: 5,
            top_k: 5,
            budget: 10,
            max_df_ratio: 0.25,
        }
    }
}

/// Keywords of a query: preprocessed with compounds kept, deduplicated in
/// order of first occurrence.
pub fn collect_keywords(q: &QueryRecord, stops: &StopList) -> Result<KeywordSet> {
    let seq = preprocess_with_id(&q.text, stops, SplitMode::SplitAndKeepWhole, &q.query_id);
    let mut seen = HashSet::new();
    let keywords: Vec<Keyword> = seq
        .tokens
        .into_iter()
        .filter(|t| seen.insert(t.normalized.clone()))
        .map(|t| Keyword {
            from_identifier: t.origin == Origin::CamelPart || t.is_compound(),
            term: t.normalized,
            surface: t.surface,
        })
        .collect();
    if keywords.is_empty() {
        return Err(Error::QueryEmpty {
            query_id: q.query_id.clone(),
        });
    }
    Ok(KeywordSet { keywords })
}

/// Keeps nominal keywords found in at most `max_df_ratio` of the documents.
/// Returns the input unchanged when nothing would survive.
pub fn reduce_keywords(
    k: &KeywordSet,
    corpus: &Corpus,
    oracle: &dyn NounOracle,
    max_df_ratio: f64,
) -> Result<KeywordSet> {
    let mut kept = Vec::new();
    for kw in &k.keywords {
        if oracle.is_nominal(&kw.info()) && corpus.document_frequency_ratio(&kw.term)? <= max_df_ratio {
            kept.push(kw.clone());
        }
    }
    if kept.is_empty() {
        return Ok(k.clone());
    }
    Ok(KeywordSet { keywords: kept })
}

/// A candidate term before scoring.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord)]
pub struct Candidate {
    pub term: String,
    pub surface: String,
    pub from_identifier: bool,
}

fn corpus_candidate(corpus: &Corpus, term: &str) -> Candidate {
    match corpus.identifier_surface(term) {
        Some(surface) => Candidate {
            term: term.to_owned(),
            surface: surface.to_owned(),
            from_identifier: true,
        },
        None => Candidate {
            term: term.to_owned(),
            surface: term.to_owned(),
            from_identifier: false,
        },
    }
}

/// Terms of the `top_docs` best-matching documents for the keywords, minus
/// the keywords and stop words. Sorted by term.
pub fn project_candidates(
    k: &KeywordSet,
    corpus: &Corpus,
    stops: &StopList,
    top_docs: usize,
) -> Result<Vec<Candidate>> {
    let hits = search_terms(corpus, k.terms(), SearchOptions::top(top_docs))?;
    let keywords = k.term_set();
    let terms: BTreeSet<&str> = hits
        .iter()
        .flat_map(|hit| corpus.document(hit.doc_index).term_counts.keys())
        .map(String::as_str)
        .filter(|t| !keywords.contains(t) && !stops.contains(t))
        .collect();
    Ok(terms
        .into_iter()
        .map(|t| corpus_candidate(corpus, t))
        .collect())
}

/// Union of the keywords' adjacency lists, minus the keywords and stop words.
pub fn crowd_candidates(k: &KeywordSet, db: &AdjacencyDatabase, stops: &StopList) -> BTreeSet<String> {
    let keywords = k.term_set();
    k.terms()
        .flat_map(|kw| db.neighbors(kw).weights.keys())
        .filter(|t| !keywords.contains(t.as_str()) && !stops.contains(t))
        .cloned()
        .collect()
}

/// Scores each project candidate by the sum over keywords of the cosine
/// similarity between adjacency vectors.
pub fn score_project_candidates(
    candidates: &[Candidate],
    k: &KeywordSet,
    db: &AdjacencyDatabase,
) -> Vec<CandidateScore> {
    let keyword_vectors: Vec<_> = k
        .terms()
        .map(|kw| {
            let v = db.neighbors(kw);
            (v, v.norm())
        })
        .collect();
    candidates
        .iter()
        .map(|c| {
            let cv = db.neighbors(&c.term);
            let c_norm = cv.norm();
            let score = if c_norm == 0.0 {
                0.0
            } else {
                keyword_vectors
                    .iter()
                    .filter(|(_, k_norm)| *k_norm > 0.0)
                    .map(|(kv, k_norm)| cv.dot(kv) / (c_norm * k_norm))
                    .sum()
            };
            CandidateScore {
                term: c.term.clone(),
                surface: c.surface.clone(),
                source: Source::Project,
                score,
                from_identifier: c.from_identifier,
            }
        })
        .collect()
}

/// Scores each crowd candidate by its summed co-occurrence count with the
/// keywords. Surfaces come from the corpus when the term is a known
/// identifier part; the nominal test treats crowd terms as plain words.
pub fn score_crowd_candidates(
    candidates: &BTreeSet<String>,
    k: &KeywordSet,
    db: &AdjacencyDatabase,
    corpus: Option<&Corpus>,
) -> Vec<CandidateScore> {
    candidates
        .iter()
        .map(|t| {
            let score: u64 = k.terms().map(|kw| db.cooccurrence_count(t, kw)).sum();
            let surface = corpus
                .and_then(|c| c.identifier_surface(t))
                .unwrap_or(t)
                .to_owned();
            CandidateScore {
                term: t.clone(),
                surface,
                source: Source::Crowd,
                score: score as f64,
                from_identifier: false,
            }
        })
        .collect()
}

fn by_score(a: &CandidateScore, b: &CandidateScore) -> std::cmp::Ordering {
    b.score.total_cmp(&a.score).then_with(|| a.term.cmp(&b.term))
}

/// Min-max normalizes scores to `[0, 1]`. A list whose scores are all equal
/// (including a single element) maps to 1.0.
fn min_max(scores: &[f64]) -> Vec<f64> {
    let max = scores.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let min = scores.iter().copied().fold(f64::INFINITY, f64::min);
    let span = max - min;
    scores
        .iter()
        .map(|&s| if span > 0.0 { (s - min) / span } else { 1.0 })
        .collect()
}

/// Merges the two scored lists.
///
/// Each list is sorted (score descending, term ascending), cut to `top_k`,
/// filtered to nominal terms and min-max normalized. The survivors are merged
/// by normalized score; on exact ties project terms come first. A term
/// present in both lists keeps its higher-ranked entry.
pub fn select_and_combine(
    r_p: &[CandidateScore],
    r_so: &[CandidateScore],
    oracle: &dyn NounOracle,
    top_k: usize,
) -> Vec<Expansion> {
    let prepare = |list: &[CandidateScore]| -> Vec<Expansion> {
        let mut sorted: Vec<&CandidateScore> = list.iter().collect();
        sorted.sort_by(|a, b| by_score(a, b));
        let top: Vec<&CandidateScore> = sorted
            .into_iter()
            .take(top_k)
            .filter(|c| oracle.is_nominal(&c.info()))
            .collect();
        let scores: Vec<f64> = top.iter().map(|c| c.score).collect();
        top.into_iter()
            .zip(min_max(&scores))
            .map(|(c, normalized)| Expansion {
                term: c.term.clone(),
                surface: c.surface.clone(),
                source: c.source,
                score: c.score,
                normalized,
                from_identifier: c.from_identifier,
            })
            .collect()
    };
    let mut merged: Vec<(usize, Expansion)> = prepare(r_p)
        .into_iter()
        .chain(prepare(r_so))
        .enumerate()
        .collect();
    merged.sort_by(|(ia, a), (ib, b)| {
        b.normalized
            .total_cmp(&a.normalized)
            .then_with(|| a.source.cmp(&b.source))
            .then_with(|| ia.cmp(ib))
    });
    let mut seen = HashSet::new();
    merged
        .into_iter()
        .map(|(_, e)| e)
        .filter(|e| seen.insert(e.term.clone()))
        .collect()
}

/// Renders terms in order, writing compound identifiers as their parts
/// followed by the whole. A normalized form is emitted at most once.
pub fn render_dual<'a, I>(surfaces: I, source_id: &str) -> TermSequence
where
    I: IntoIterator<Item = &'a str>,
{
    let mut seq = TermSequence::new(source_id);
    let mut seen = HashSet::new();
    let mut push = |seq: &mut TermSequence, surface: &str, origin: Origin| {
        let token = Token::new(surface, origin);
        if seen.insert(token.normalized.clone()) {
            seq.tokens.push(token);
        }
    };
    for surface in surfaces {
        let parts = split_camel(surface);
        if parts.len() > 1 {
            for part in parts {
                push(&mut seq, part, Origin::CamelPart);
            }
        }
        push(&mut seq, surface, Origin::Whole);
    }
    seq
}

/// Bundles everything a reformulation needs.
#[derive(Clone, Copy)]
pub struct Reformulator<'a> {
    pub corpus: &'a Corpus,
    pub db: &'a AdjacencyDatabase,
    pub stops: &'a StopList,
    pub oracle: &'a dyn NounOracle,
    pub config: ReformulatorConfig,
}

impl<'a> Reformulator<'a> {
    pub fn new(
        corpus: &'a Corpus,
        db: &'a AdjacencyDatabase,
        stops: &'a StopList,
        oracle: &'a dyn NounOracle,
    ) -> Self {
        Reformulator {
            corpus,
            db,
            stops,
            oracle,
            config: ReformulatorConfig::default(),
        }
    }

    pub fn with_config(mut self, config: ReformulatorConfig) -> Self {
        self.config = config;
        self
    }

    pub fn reduced_keywords(&self, q: &QueryRecord) -> Result<KeywordSet> {
        let keywords = collect_keywords(q, self.stops)?;
        reduce_keywords(&keywords, self.corpus, self.oracle, self.config.max_df_ratio)
    }

    /// Scored candidate lists `(R_p, R_so)` for the reduced keywords.
    pub fn scored_candidates(
        &self,
        k: &KeywordSet,
        mode: Mode,
    ) -> Result<(Vec<CandidateScore>, Vec<CandidateScore>)> {
        let r_p = if mode.uses_project() {
            let t_p = project_candidates(k, self.corpus, self.stops, self.config.top_docs)?;
            score_project_candidates(&t_p, k, self.db)
        } else {
            Vec::new()
        };
        let r_so = if mode.uses_crowd() {
            let t_so = crowd_candidates(k, self.db, self.stops);
            score_crowd_candidates(&t_so, k, self.db, Some(self.corpus))
        } else {
            Vec::new()
        };
        Ok((r_p, r_so))
    }

    pub fn reformulate(&self, q: &QueryRecord, mode: Mode) -> Result<Reformulation> {
        let reduced = self.reduced_keywords(q)?;
        let room = self.config.budget.saturating_sub(reduced.len());
        let expansions = if mode == Mode::ReductionOnly || room == 0 {
            Vec::new()
        } else {
            let (r_p, r_so) = self.scored_candidates(&reduced, mode)?;
            let mut merged = select_and_combine(&r_p, &r_so, self.oracle, self.config.top_k);
            merged.truncate(room);
            merged
        };
        let rendered = render_dual(
            reduced
                .keywords
                .iter()
                .map(|k| k.surface.as_str())
                .chain(expansions.iter().map(|e| e.surface.as_str())),
            &q.query_id,
        );
        Ok(Reformulation {
            query_id: q.query_id.clone(),
            strategy: Strategy::Quickar(mode),
            reduced_keywords: reduced,
            expansions,
            rendered,
        })
    }
}

/// Keywords of a query with no reduction or expansion.
pub fn preprocessed_baseline(q: &QueryRecord, stops: &StopList) -> Result<Reformulation> {
    let keywords = collect_keywords(q, stops)?;
    let mut rendered = TermSequence::new(q.query_id.as_str());
    rendered.tokens = keywords
        .keywords
        .iter()
        .map(|k| Token::new(&k.surface, Origin::Whole))
        .collect();
    Ok(Reformulation {
        query_id: q.query_id.clone(),
        strategy: Strategy::PreprocessedBaseline,
        reduced_keywords: keywords,
        expansions: Vec::new(),
        rendered,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::adjacency::{DbMeta, PairCounter};
    use crate::corpus::{corpus_from_texts, CorpusOptions};

    fn cs(term: &str, source: Source, score: f64) -> CandidateScore {
        CandidateScore {
            term: term.into(),
            surface: term.into(),
            source,
            score,
            from_identifier: false,
        }
    }

    fn terms(list: &[Expansion]) -> Vec<&str> {
        list.iter().map(|e| e.term.as_str()).collect()
    }

    #[test]
    fn collect_working_example() {
        let q = QueryRecord::new("408030", "RestClientService ignores content encoding");
        let k = collect_keywords(&q, &StopList::default_stopwords()).unwrap();
        assert_eq!(
            k.terms().collect::<Vec<_>>(),
            ["rest", "client", "service", "restclientservice", "ignores", "content", "encoding"]
        );
    }

    #[test]
    fn collect_all_stop_words() {
        let q = QueryRecord::new("x", "a the of");
        assert!(matches!(
            collect_keywords(&q, &StopList::default_stopwords()),
            Err(Error::QueryEmpty { .. })
        ));
    }

    #[test]
    fn collect_dedups_keeping_first() {
        let q = QueryRecord::new("x", "Leak leak LEAK heap");
        let k = collect_keywords(&q, &StopList::empty()).unwrap();
        assert_eq!(k.terms().collect::<Vec<_>>(), ["leak", "heap"]);
        assert_eq!(k.keywords[0].surface, "Leak");
    }

    #[test]
    fn oracle_rules() {
        let oracle = LexiconNounOracle::default();
        let plain = |w: &'static str| TermInfo {
            normalized: w,
            surface: w,
            from_identifier: false,
        };
        assert!(oracle.is_nominal(&plain("content")));
        assert!(!oracle.is_nominal(&plain("ignores")));
        assert!(!oracle.is_nominal(&plain("encoding")));
        assert!(!oracle.is_nominal(&plain("crashed")));
        assert!(oracle.is_nominal(&plain("string")));
        assert!(oracle.is_nominal(&plain("red")));
        assert!(oracle.is_nominal(&TermInfo {
            normalized: "get",
            surface: "get",
            from_identifier: true,
        }));
    }

    #[test]
    fn reduction_drops_verbs_and_common_terms() {
        let docs: Vec<(String, String)> = (0..8)
            .map(|i| {
                let text = match i {
                    0 => "RestClientService content encoding",
                    1 => "content holder",
                    _ => "encoding stream",
                };
                (format!("d{i}"), text.to_owned())
            })
            .collect();
        let corpus = corpus_from_texts(docs, &CorpusOptions::default());
        let q = QueryRecord::new("408030", "RestClientService ignores content encoding");
        let k = collect_keywords(&q, &StopList::default_stopwords()).unwrap();
        let reduced = reduce_keywords(&k, &corpus, &LexiconNounOracle::default(), 0.25).unwrap();
        assert_eq!(
            reduced.terms().collect::<Vec<_>>(),
            ["rest", "client", "service", "restclientservice", "content"]
        );
    }

    #[test]
    fn reduction_guard_returns_original() {
        let corpus = corpus_from_texts([("a", "heap leak"), ("b", "heap leak")], &CorpusOptions::default());
        let q = QueryRecord::new("q", "heap leak");
        let k = collect_keywords(&q, &StopList::default_stopwords()).unwrap();
        let reduced = reduce_keywords(&k, &corpus, &AllNominal, 0.25).unwrap();
        assert_eq!(reduced, k);
    }

    #[test]
    fn reduction_planted_ratios() {
        let docs: Vec<(String, String)> = (0..10)
            .map(|i| {
                let mut words = vec!["filler".to_owned()];
                if i < 2 {
                    words.push("rare".into());
                }
                if i < 3 {
                    words.push("common".into());
                }
                (format!("d{i}"), words.join(" "))
            })
            .collect();
        let corpus = corpus_from_texts(docs, &CorpusOptions::default());
        let q = QueryRecord::new("q", "rare common");
        let k = collect_keywords(&q, &StopList::empty()).unwrap();
        let reduced = reduce_keywords(&k, &corpus, &AllNominal, 0.25).unwrap();
        assert_eq!(reduced.terms().collect::<Vec<_>>(), ["rare"]);
    }

    #[test]
    fn project_candidates_single_doc() {
        let corpus = corpus_from_texts([("d", "alpha beta")], &CorpusOptions::default());
        let k = collect_keywords(&QueryRecord::new("q", "alpha"), &StopList::empty()).unwrap();
        let t_p = project_candidates(&k, &corpus, &StopList::empty(), 5).unwrap();
        assert_eq!(t_p.iter().map(|c| c.term.as_str()).collect::<Vec<_>>(), ["beta"]);
        let none = collect_keywords(&QueryRecord::new("q", "gamma"), &StopList::empty()).unwrap();
        assert!(project_candidates(&none, &corpus, &StopList::empty(), 5)
            .unwrap()
            .is_empty());
    }

    fn tiny_db(titles: &[&[&str]]) -> AdjacencyDatabase {
        let mut counter = PairCounter::new(2);
        for t in titles {
            counter.add_terms(t);
        }
        counter.finish(DbMeta::new(2, &StopList::empty(), "test"))
    }

    #[test]
    fn crowd_scores_sum_cooccurrence() {
        let db = tiny_db(&[&["memory", "leak"], &["memory", "leak", "java"], &["heap", "memory"]]);
        let k = collect_keywords(&QueryRecord::new("q", "memory"), &StopList::empty()).unwrap();
        let t_so = crowd_candidates(&k, &db, &StopList::empty());
        assert_eq!(t_so.iter().map(String::as_str).collect::<Vec<_>>(), ["heap", "leak"]);
        let scored = score_crowd_candidates(&t_so, &k, &db, None);
        assert_eq!(scored[1].term, "leak");
        assert_eq!(scored[1].score, 2.0);
        let unknown = collect_keywords(&QueryRecord::new("q", "quantum"), &StopList::empty()).unwrap();
        assert!(crowd_candidates(&unknown, &db, &StopList::empty()).is_empty());
    }

    #[test]
    fn project_scores_identical_and_disjoint_contexts() {
        let db = tiny_db(&[&["a", "x"], &["x", "b"], &["c", "y"]]);
        let k = collect_keywords(&QueryRecord::new("q", "a"), &StopList::empty()).unwrap();
        let cands = vec![
            Candidate {
                term: "b".into(),
                surface: "b".into(),
                from_identifier: false,
            },
            Candidate {
                term: "c".into(),
                surface: "c".into(),
                from_identifier: false,
            },
        ];
        let scored = score_project_candidates(&cands, &k, &db);
        assert!((scored[0].score - 1.0).abs() < 1e-12);
        assert_eq!(scored[1].score, 0.0);
    }

    #[test]
    fn combine_pins_tie_rule() {
        let r_p = vec![cs("a", Source::Project, 2.0), cs("b", Source::Project, 1.0)];
        let r_so = vec![cs("c", Source::Crowd, 10.0), cs("a", Source::Crowd, 4.0)];
        let r = select_and_combine(&r_p, &r_so, &AllNominal, 5);
        assert_eq!(terms(&r), ["a", "c", "b"]);
        assert_eq!(r[0].source, Source::Project);
        assert_eq!(r[0].normalized, 1.0);
        assert_eq!(r[2].normalized, 0.0);
    }

    #[test]
    fn combine_single_source() {
        let r_so: Vec<_> = [("f", 1.0), ("a", 6.0), ("b", 5.0), ("c", 4.0), ("d", 3.0), ("e", 2.0)]
            .into_iter()
            .map(|(t, s)| cs(t, Source::Crowd, s))
            .collect();
        let r = select_and_combine(&[], &r_so, &AllNominal, 5);
        assert_eq!(terms(&r), ["a", "b", "c", "d", "e"]);
        assert!(select_and_combine(&[], &[], &AllNominal, 5).is_empty());
    }

    #[test]
    fn combine_filters_after_top_k() {
        let r_so = vec![
            cs("running", Source::Crowd, 9.0),
            cs("heap", Source::Crowd, 8.0),
            cs("stack", Source::Crowd, 1.0),
        ];
        let r = select_and_combine(&[], &r_so, &LexiconNounOracle::default(), 2);
        assert_eq!(terms(&r), ["heap"]);
        assert_eq!(r[0].normalized, 1.0);
    }

    #[test]
    fn dual_rendering() {
        let seq = render_dual(
            ["Rest", "Client", "Service", "RestClientService", "content", "WebService", "Http"],
            "q",
        );
        assert_eq!(
            seq.render(),
            "Rest Client Service RestClientService content Web WebService Http"
        );
    }

    #[test]
    fn strategy_names_round_trip() {
        for s in Strategy::ALL {
            assert_eq!(s.name().parse::<Strategy>().unwrap(), s);
        }
        assert!("bogus".parse::<Strategy>().is_err());
        assert_eq!("red".parse::<Mode>().unwrap(), Mode::ReductionOnly);
        assert!("rocchio".parse::<Mode>().is_err());
    }
}
