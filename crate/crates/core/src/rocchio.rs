//! Rocchio pseudo-relevance-feedback expansion, the comparison baseline.
//!
//! The preprocessed title is searched, the top documents are assumed
//! relevant, and every other term in them is scored by the sum of its TF-IDF
//! weight over those documents. The best terms are appended to the keywords.
//! No reduction and no nominal filtering take place.

use std::collections::BTreeMap;

use crate::corpus::Corpus;
use crate::error::Result;
use crate::reformulate::{
    collect_keywords, Expansion, QueryRecord, Reformulation, Source, Strategy,
};
use crate::search::{idf, search_terms, tf_weight, SearchOptions};
use crate::textprep::{Origin, StopList, TermSequence, Token};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RocchioConfig {
    pub top_docs: usize,
    /// Number of terms appended. `None` fills the query up to `budget`.
    pub expansion_count: Option<usize>,
    pub budget: usize,
}

impl Default for RocchioConfig {
    fn default() -> Self {
        RocchioConfig {
            top_docs: 5,
            expansion_count: None,
            budget: 10,
        }
    }
}

/// Feedback scores of all candidate terms, best first (ties by term).
pub fn rocchio_scores(
    corpus: &Corpus,
    keywords: &[&str],
    stops: &StopList,
    top_docs: usize,
) -> Result<Vec<(String, f64)>> {
    let hits = search_terms(corpus, keywords.iter().copied(), SearchOptions::top(top_docs))?;
    let n = corpus.n_docs();
    let mut scores: BTreeMap<&str, f64> = BTreeMap::new();
    for hit in &hits {
        for (term, &count) in &corpus.document(hit.doc_index).term_counts {
            if keywords.contains(&term.as_str()) || stops.contains(term) {
                continue;
            }
            *scores.entry(term).or_default() += tf_weight(count) * idf(n, corpus.doc_freq(term));
        }
    }
    let mut ranked: Vec<(String, f64)> = scores
        .into_iter()
        .map(|(t, s)| (t.to_owned(), s))
        .collect();
    ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    Ok(ranked)
}

pub fn rocchio_expand(
    q: &QueryRecord,
    corpus: &Corpus,
    stops: &StopList,
    cfg: RocchioConfig,
) -> Result<Reformulation> {
    let keywords = collect_keywords(q, stops)?;
    let terms: Vec<&str> = keywords.terms().collect();
    let count = cfg
        .expansion_count
        .unwrap_or_else(|| cfg.budget.saturating_sub(terms.len()));
    let expansions: Vec<Expansion> = rocchio_scores(corpus, &terms, stops, cfg.top_docs)?
        .into_iter()
        .take(count)
        .map(|(term, score)| {
            let surface = corpus.identifier_surface(&term);
            Expansion {
                surface: surface.unwrap_or(&term).to_owned(),
                from_identifier: surface.is_some(),
                term,
                source: Source::Project,
                score,
                normalized: score,
            }
        })
        .collect();
    let mut rendered = TermSequence::new(q.query_id.as_str());
    rendered.tokens = keywords
        .keywords
        .iter()
        .map(|k| k.surface.as_str())
        .chain(expansions.iter().map(|e| e.surface.as_str()))
        .map(|s| Token::new(s, Origin::Whole))
        .collect();
    Ok(Reformulation {
        query_id: q.query_id.clone(),
        strategy: Strategy::Rocchio,
        reduced_keywords: keywords,
        expansions,
        rendered,
    })
}
