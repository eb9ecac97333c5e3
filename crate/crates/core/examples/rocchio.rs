//! Pseudo-relevance feedback expansion over the top retrieved methods.
//!
//! ```bash
//! cargo run --example rocchio -- "connection pool leaks sockets"
//! ```

use std::error::Error;
use std::path::PathBuf;

use quickar::rocchio::rocchio_scores;
use quickar::reformulate::collect_keywords;
use quickar::{build_corpus, rocchio_expand, CorpusOptions, QueryRecord, RocchioConfig, StopList};

fn main() -> Result<(), Box<dyn Error>> {
    let title = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "connection pool leaks sockets".to_owned());
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/project");
    let corpus = build_corpus(root, &CorpusOptions::default())?.corpus;
    let stops = StopList::default_stopwords();
    let query = QueryRecord::new("example", title.as_str());

    let keywords = collect_keywords(&query, &stops)?;
    let terms: Vec<&str> = keywords.terms().collect();
    println!("feedback scores over the top 5 documents:");
    for (term, score) in rocchio_scores(&corpus, &terms, &stops, 5)?.iter().take(10) {
        println!("  {term:<20} {score:.3}");
    }

    let r = rocchio_expand(&query, &corpus, &stops, RocchioConfig::default())?;
    println!("expanded: {}", r.rendered_query());
    Ok(())
}
