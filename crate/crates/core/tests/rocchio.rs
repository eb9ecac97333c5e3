mod common;

use std::collections::BTreeSet;

use quickar::reformulate::collect_keywords;
use quickar::rocchio::rocchio_scores;
use quickar::{
    corpus_from_texts, rocchio_expand, search_terms, Corpus, CorpusOptions, QueryRecord,
    RocchioConfig, SearchOptions, StopList,
};

fn assert_matches_oracle(corpus: &Corpus, stops: &StopList, terms: &[&str]) {
    let oracle = common::DenseIndex::new(corpus);
    let got = rocchio_scores(corpus, terms, stops, 5).unwrap();
    let want = oracle.rocchio(terms, stops, 5);
    assert_eq!(got.len(), want.len(), "{terms:?}");
    for ((gt, gs), (wt, ws)) in got.iter().zip(&want) {
        assert_eq!(gt, wt, "{terms:?}");
        assert!((gs - ws).abs() <= 1e-9);
    }
}

#[test]
fn twenty_docs_match_summation_oracle() {
    let texts: Vec<(String, String)> = (0..20)
        .map(|i| {
            let words: Vec<String> = (0..6).map(|j| format!("w{}", (i * 7 + j * j) % 17)).collect();
            (format!("doc{i:02}"), words.join(" "))
        })
        .collect();
    let corpus = corpus_from_texts(texts, &CorpusOptions::default());
    let stops = StopList::default_stopwords();
    for q in [&["w1", "w4"][..], &["w9"], &["w0", "w16", "w3"], &["missing"]] {
        assert_matches_oracle(&corpus, &stops, q);
    }
}

#[test]
fn fixture_queries_match_summation_oracle() {
    let corpus = common::fixture_corpus();
    let stops = StopList::default_stopwords();
    for q in common::fixture_queries() {
        let k = collect_keywords(&q, &stops).unwrap();
        let terms: Vec<&str> = k.terms().collect();
        assert_matches_oracle(&corpus, &stops, &terms);
    }
}

#[test]
fn expansions_come_from_top_documents() {
    let corpus = common::fixture_corpus();
    let stops = StopList::default_stopwords();
    for q in common::fixture_queries() {
        let r = rocchio_expand(&q, &corpus, &stops, RocchioConfig::default()).unwrap();
        let k = collect_keywords(&q, &stops).unwrap();
        assert!(r.reduced_keywords.len() + r.expansions.len() <= 10.max(k.len()));
        let top = search_terms(&corpus, k.terms(), SearchOptions::top(5)).unwrap();
        let vocab: BTreeSet<&str> = top
            .iter()
            .flat_map(|h| corpus.document(h.doc_index).term_counts.keys().map(String::as_str))
            .collect();
        for e in &r.expansions {
            assert!(vocab.contains(e.term.as_str()), "{}", e.term);
            assert!(!k.contains(&e.term));
        }
        assert_eq!(r, rocchio_expand(&q, &corpus, &stops, RocchioConfig::default()).unwrap());
    }
}

#[test]
fn explicit_expansion_count() {
    let corpus = corpus_from_texts([("d", "alpha beta beta")], &CorpusOptions::default());
    let cfg = RocchioConfig {
        expansion_count: Some(1),
        ..RocchioConfig::default()
    };
    let r = rocchio_expand(&QueryRecord::new("q", "alpha"), &corpus, &StopList::empty(), cfg).unwrap();
    assert_eq!(r.rendered_query(), "alpha beta");
    let none = RocchioConfig {
        expansion_count: Some(0),
        ..RocchioConfig::default()
    };
    let r = rocchio_expand(&QueryRecord::new("q", "alpha"), &corpus, &StopList::empty(), none).unwrap();
    assert_eq!(r.rendered_query(), "alpha");
}
