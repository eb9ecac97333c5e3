//! Split a Java source tree into method documents and inspect the index.
//!
//! ```bash
//! cargo run --example index_corpus -- [src-dir] [out.txt]
//! ```

use std::error::Error;
use std::path::PathBuf;

use quickar::{build_corpus, CorpusOptions};

fn main() -> Result<(), Box<dyn Error>> {
    let mut args = std::env::args().skip(1);
    let root = args.next().map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/project")
    });
    let out = args.next();

    let build = build_corpus(&root, &CorpusOptions::default())?;
    for w in &build.warnings {
        eprintln!("warning: {w}");
    }
    let corpus = build.corpus;
    println!("{} files, {} method documents", build.files, corpus.n_docs());
    for doc in corpus.documents().iter().take(5) {
        println!("  {} ({} distinct terms)", doc.doc_id, doc.term_counts.len());
    }

    let mut common: Vec<(&str, u32)> = corpus.vocabulary().collect();
    common.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(b.0)));
    println!("most widespread terms:");
    for (term, df) in common.iter().take(8) {
        println!(
            "  {term:<16} df={df:<3} ratio={:.2}",
            corpus.document_frequency_ratio(term)?
        );
    }

    if let Some(path) = out {
        corpus.save(&path)?;
        println!("saved {path}");
    }
    Ok(())
}
