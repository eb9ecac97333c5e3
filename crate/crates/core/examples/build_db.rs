//! Mine a word adjacency database from a question-title dump.
//!
//! ```bash
//! cargo run --example build_db -- [dump.tsv] [out.txt]
//! ```
//!
//! Without arguments the bundled fixture dump is used and nothing is written.

use std::error::Error;
use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use quickar::adjacency::{filter_titles, read_dump};
use quickar::{AdjacencyDatabase, DbMeta, StopList};

fn main() -> Result<(), Box<dyn Error>> {
    let mut args = std::env::args().skip(1);
    let dump = args.next().map(PathBuf::from).unwrap_or_else(|| {
        PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures/titles.tsv")
    });
    let out = args.next();

    let stops = StopList::default_stopwords();
    let mut titles = filter_titles(read_dump(BufReader::new(File::open(&dump)?)), "java");
    let records: Vec<_> = titles.by_ref().collect();
    for bad in titles.malformed() {
        eprintln!("skipped line {}: {}", bad.line, bad.reason);
    }

    let meta = DbMeta::new(2, &stops, dump.display().to_string());
    let db = AdjacencyDatabase::build_parallel(&records, &stops, meta);
    println!(
        "{} titles, {} words, {} pairs",
        records.len(),
        db.vocab_size(),
        db.total_pair_count()
    );

    for word in ["memory", "connection", "json"] {
        let mut row: Vec<(&String, &u64)> = db.neighbors(word).weights.iter().collect();
        row.sort_by(|a, b| b.1.cmp(a.1).then_with(|| a.0.cmp(b.0)));
        let shown: Vec<String> = row.iter().take(6).map(|(w, c)| format!("{w}:{c}")).collect();
        println!("{word:>10} -> {}", shown.join(" "));
    }
    println!(
        "cos(memory, leak) = {:.3}",
        db.neighbors("memory").cosine(&db.neighbors("leak"))
    );

    if let Some(path) = out {
        db.save(&path)?;
        println!("saved {path}");
    }
    Ok(())
}
