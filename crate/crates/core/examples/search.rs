//! Rank method documents for a free-text query.
//!
//! ```bash
//! cargo run --example search -- "gzip content encoding"
//! ```

use std::error::Error;
use std::path::PathBuf;

use quickar::{build_corpus, preprocess, search, CorpusOptions, SplitMode, StopList};

fn main() -> Result<(), Box<dyn Error>> {
    let query = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "gzip content encoding".to_owned());
    let root = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/project");
    let corpus = build_corpus(root, &CorpusOptions::default())?.corpus;

    let terms = preprocess(&query, &StopList::default_stopwords(), SplitMode::SplitAndKeepWhole);
    for hit in search(&corpus, &terms, Some(10))? {
        println!("{:>3}  {:.4}  {}", hit.rank, hit.score, hit.doc_id);
    }
    Ok(())
}
