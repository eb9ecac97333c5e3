//! TF-IDF cosine retrieval over a [`Corpus`].
//!
//! Term weights are `(1 + ln tf) * (ln((N + 1) / (df + 1)) + 1)` on both the
//! query and the document side, and scores are the cosine of the two
//! L2-normalized vectors. Documents sharing no term with the query are not
//! returned. Ties are broken by document id so rankings are total.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;

use serde::Serialize;

use crate::corpus::Corpus;
use crate::error::{Error, Result};
use crate::textprep::TermSequence;

pub fn tf_weight(count: u32) -> f64 {
    1.0 + (count as f64).ln()
}

pub fn idf(n_docs: usize, df: u32) -> f64 {
    ((n_docs as f64 + 1.0) / (df as f64 + 1.0)).ln() + 1.0
}

fn doc_norms(corpus: &Corpus) -> Vec<f64> {
    let n = corpus.n_docs();
    corpus
        .documents()
        .iter()
        .map(|doc| {
            doc.term_counts
                .iter()
                .map(|(term, &count)| {
                    let w = tf_weight(count) * idf(n, corpus.doc_freq(term));
                    w * w
                })
                .sum::<f64>()
                .sqrt()
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SearchHit {
    pub doc_id: String,
    #[serde(skip)]
    pub doc_index: usize,
    pub score: f64,
    pub rank: usize,
}

/// Rank of the first relevant document in a result list.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Rank {
    At(usize),
    NotRetrieved,
}

impl Rank {
    pub fn position(self) -> Option<usize> {
        match self {
            Rank::At(r) => Some(r),
            Rank::NotRetrieved => None,
        }
    }

    pub fn is_retrieved(self) -> bool {
        matches!(self, Rank::At(_))
    }
}

impl fmt::Display for Rank {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Rank::At(r) => write!(f, "{r}"),
            Rank::NotRetrieved => f.write_str("NA"),
        }
    }
}

/// Query-side TF-IDF weights. Out-of-vocabulary terms get the `df = 0`
/// weight; they never match but still count toward the query norm.
#[derive(Debug, Clone, PartialEq, Default)]
pub struct QueryVector {
    pub weights: BTreeMap<String, f64>,
}

impl QueryVector {
    pub fn new<'a, I>(corpus: &Corpus, terms: I, drop_unknown: bool) -> Self
    where
        I: IntoIterator<Item = &'a str>,
    {
        let mut counts: BTreeMap<&str, u32> = BTreeMap::new();
        for term in terms {
            *counts.entry(term).or_default() += 1;
        }
        let n = corpus.n_docs();
        let weights = counts
            .into_iter()
            .filter_map(|(term, count)| {
                let df = corpus.doc_freq(term);
                if df == 0 && drop_unknown {
                    return None;
                }
                let w = tf_weight(count) * idf(n, df);
                (w > 0.0).then(|| (term.to_owned(), w))
            })
            .collect();
        QueryVector { weights }
    }

    pub fn norm(&self) -> f64 {
        self.weights.values().map(|w| w * w).sum::<f64>().sqrt()
    }
}

#[derive(Debug, Clone, Copy, Default)]
pub struct SearchOptions {
    /// Keep only the first `n` hits; `None` returns every matching document.
    pub top_n: Option<usize>,
    /// Remove out-of-vocabulary query terms before weighting.
    pub drop_unknown: bool,
}

impl SearchOptions {
    pub fn top(n: usize) -> Self {
        SearchOptions {
            top_n: Some(n),
            drop_unknown: false,
        }
    }

    pub fn all() -> Self {
        SearchOptions::default()
    }
}

pub fn search(corpus: &Corpus, query: &TermSequence, top_n: Option<usize>) -> Result<Vec<SearchHit>> {
    let opts = SearchOptions {
        top_n,
        drop_unknown: false,
    };
    search_terms(corpus, query.normalized(), opts)
}

/// Ranks documents against normalized query terms.
pub fn search_terms<'a, I>(corpus: &Corpus, terms: I, opts: SearchOptions) -> Result<Vec<SearchHit>>
where
    I: IntoIterator<Item = &'a str>,
{
    if corpus.is_empty() {
        return Err(Error::EmptyCorpus);
    }
    let query = QueryVector::new(corpus, terms, opts.drop_unknown);
    Ok(search_vector(corpus, &query, opts.top_n))
}

pub fn search_vector(corpus: &Corpus, query: &QueryVector, top_n: Option<usize>) -> Vec<SearchHit> {
    let q_norm = query.norm();
    if q_norm == 0.0 {
        return Vec::new();
    }
    let norms = corpus.cached_norms(doc_norms);
    let n = corpus.n_docs();
    let mut dots: HashMap<u32, f64> = HashMap::new();
    for (term, &q_w) in &query.weights {
        let postings = corpus.postings(term);
        if postings.is_empty() {
            continue;
        }
        let term_idf = idf(n, corpus.doc_freq(term));
        for &(doc, count) in postings {
            *dots.entry(doc).or_default() += q_w * tf_weight(count) * term_idf;
        }
    }
    let mut hits: Vec<SearchHit> = dots
        .into_iter()
        .map(|(doc, dot)| {
            let idx = doc as usize;
            SearchHit {
                doc_id: corpus.document(idx).doc_id.clone(),
                doc_index: idx,
                score: dot / (q_norm * norms[idx]),
                rank: 0,
            }
        })
        .collect();
    hits.sort_by(|a, b| {
        b.score
            .total_cmp(&a.score)
            .then_with(|| a.doc_id.cmp(&b.doc_id))
    });
    if let Some(limit) = top_n {
        hits.truncate(limit);
    }
    for (i, hit) in hits.iter_mut().enumerate() {
        hit.rank = i + 1;
    }
    hits
}

/// Smallest rank among hits whose id is in `gold`.
pub fn rank_of_first_relevant(hits: &[SearchHit], gold: &BTreeSet<String>) -> Result<Rank> {
    if gold.is_empty() {
        return Err(Error::EmptyGold(Vec::new()));
    }
    Ok(hits
        .iter()
        .find(|hit| gold.contains(&hit.doc_id))
        .map_or(Rank::NotRetrieved, |hit| Rank::At(hit.rank)))
}
