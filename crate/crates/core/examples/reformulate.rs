//! Reduce and expand a change-request title with project and crowd terms.
//!
//! ```bash
//! cargo run --example reformulate -- "RestClientService ignores content encoding"
//! ```

use std::error::Error;
use std::fs::File;
use std::io::BufReader;
use std::path::PathBuf;

use quickar::adjacency::{filter_titles, read_dump};
use quickar::{
    build_corpus, AdjacencyDatabase, CorpusOptions, DbMeta, LexiconNounOracle, Mode, QueryRecord,
    Reformulator, StopList,
};

fn main() -> Result<(), Box<dyn Error>> {
    let title = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "RestClientService ignores content encoding".to_owned());
    let fixtures = PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures");

    let stops = StopList::default_stopwords();
    let corpus = build_corpus(fixtures.join("project"), &CorpusOptions::default())?.corpus;
    let dump = read_dump(BufReader::new(File::open(fixtures.join("titles.tsv"))?));
    let db = AdjacencyDatabase::build(filter_titles(dump, "java"), &stops, DbMeta::new(2, &stops, "titles.tsv"));

    let oracle = LexiconNounOracle::default();
    let engine = Reformulator::new(&corpus, &db, &stops, &oracle);
    let query = QueryRecord::new("example", title.as_str());

    let reduced = engine.reduced_keywords(&query)?;
    println!("kept keywords: {:?}", reduced.terms().collect::<Vec<_>>());

    let (project, crowd) = engine.scored_candidates(&reduced, Mode::All)?;
    for (label, mut list) in [("project", project), ("crowd", crowd)] {
        list.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.term.cmp(&b.term)));
        let top: Vec<String> = list
            .iter()
            .take(5)
            .map(|c| format!("{}={:.2}", c.surface, c.score))
            .collect();
        println!("{label:>8} candidates: {}", top.join(", "));
    }

    for mode in [Mode::ReductionOnly, Mode::ProjectOnly, Mode::CrowdOnly, Mode::All] {
        let r = engine.reformulate(&query, mode)?;
        println!("{:<14} {}", r.strategy.to_string(), r.rendered_query());
    }
    Ok(())
}
