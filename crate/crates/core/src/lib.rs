//! Query reformulation for concept location.
//!
//! A change-request title is reduced to its informative keywords and then
//! expanded with terms drawn from two sources: the source code documents the
//! title already retrieves, and a word adjacency database mined from
//! programming Q&A titles. Retrieval is a TF-IDF vector space model over
//! method-level documents.
//!
//! ```no_run
//! use quickar::{AdjacencyDatabase, Corpus, LexiconNounOracle, Mode, QueryRecord, Reformulator, StopList};
//!
//! let corpus = Corpus::load("index.txt")?;
//! let db = AdjacencyDatabase::load("adjacency.txt")?;
//! let stops = StopList::default_stopwords();
//! let oracle = LexiconNounOracle::default();
//! let reformulator = Reformulator::new(&corpus, &db, &stops, &oracle);
//! let q = QueryRecord::new("q1", "RestClientService ignores content encoding");
//! println!("{}", reformulator.reformulate(&q, Mode::All)?.rendered_query());
//! # Ok::<(), quickar::Error>(())
//! ```

pub mod adjacency;
pub mod cli;
pub mod corpus;
pub mod error;
pub mod eval;
pub mod reformulate;
pub mod rocchio;
pub mod search;
pub mod textprep;

pub use adjacency::{AdjacencyDatabase, AdjacencyVector, DbMeta, PairCounter, TitleRecord};
pub use corpus::{build_corpus, build_presplit_corpus, corpus_from_texts, Corpus, CorpusOptions, Document};
pub use error::{Error, Result};
pub use eval::{mann_whitney_u, run_evaluation, Classification, EvalOutcome, EvalReport, Evaluator, MwuResult, RankSummary};
pub use reformulate::{
    AllNominal, Expansion, KeywordSet, LexiconNounOracle, Mode, NounOracle, QueryRecord, Reformulation, Reformulator,
    ReformulatorConfig, Source, Strategy,
};
pub use rocchio::{rocchio_expand, RocchioConfig};
pub use search::{search, search_terms, Rank, SearchHit, SearchOptions};
pub use textprep::{preprocess, SplitMode, StopList, TermSequence, Token, WordList};
