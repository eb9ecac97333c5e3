//! Evaluate every strategy on the bundled queries and print the report.
//!
//! ```bash
//! cargo run --example evaluate -- [report-dir]
//! ```

use std::error::Error;
use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use quickar::adjacency::{filter_titles, read_dump};
use quickar::eval::{emit_report, read_queries};
use quickar::{
    build_corpus, run_evaluation, AdjacencyDatabase, CorpusOptions, DbMeta, Evaluator,
    LexiconNounOracle, Mode, Reformulator, StopList, Strategy,
};

fn main() -> Result<(), Box<dyn Error>> {
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");
    let stops = StopList::default_stopwords();
    let corpus = build_corpus(fixtures.join("project"), &CorpusOptions::default())?.corpus;
    let dump = read_dump(BufReader::new(File::open(fixtures.join("titles.tsv"))?));
    let db = AdjacencyDatabase::build(filter_titles(dump, "java"), &stops, DbMeta::new(2, &stops, "titles.tsv"));
    let queries = read_queries(fixtures.join("queries.tsv"))?;

    let oracle = LexiconNounOracle::default();
    let evaluator = Evaluator::new(Reformulator::new(&corpus, &db, &stops, &oracle));
    let strategies = [
        Strategy::Quickar(Mode::All),
        Strategy::Quickar(Mode::ReductionOnly),
        Strategy::Rocchio,
        Strategy::PreprocessedBaseline,
    ];
    let report = run_evaluation(&evaluator, &queries, &strategies, false)?;
    print!("{}", report.to_text());

    if let Some(dir) = std::env::args().nth(1) {
        emit_report(&report, &dir)?;
        println!("wrote {dir}/report.json, report.txt, outcomes.tsv");
    }
    Ok(())
}
