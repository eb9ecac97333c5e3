//! Command-line front end: `build-db`, `index`, `search`, `reformulate` and
//! `evaluate`.
//!
//! Settings come from three layers, later ones winning: built-in defaults,
//! an optional TOML file given with `--config`, and command-line flags.

use std::ffi::OsString;
use std::fs::{self, File};
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::adjacency::{filter_titles, read_dump, AdjacencyDatabase, Counting, DbMeta, TitleRecord, DEFAULT_WINDOW};
use crate::corpus::{build_corpus, build_presplit_corpus, java_keywords, Corpus, CorpusOptions};
use crate::error::{Error, Result};
use crate::eval::{emit_report, read_queries, run_evaluation, Evaluator};
use crate::reformulate::{
    preprocessed_baseline, LexiconNounOracle, Mode, QueryRecord, Reformulation, Reformulator,
    ReformulatorConfig, Strategy,
};
use crate::rocchio::{rocchio_expand, RocchioConfig};
use crate::search::{search_terms, SearchOptions};
use crate::textprep::{preprocess, SplitMode, StopList, WordList};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_DATA: i32 = 2;

/// Values a `--config` file may set. Every key is optional.
#[derive(Debug, Clone, Default, PartialEq, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ConfigFile {
    pub stoplist_path: Option<PathBuf>,
    pub keywords_path: Option<PathBuf>,
    pub window: Option<usize>,
    pub top_docs: Option<usize>,
    pub top_k: Option<usize>,
    pub query_budget: Option<usize>,
    pub mode: Option<String>,
}

impl ConfigFile {
    pub fn parse(text: &str) -> Result<Self> {
        toml::from_str(text).map_err(|e| Error::Config(e.to_string()))
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::parse(&text).map_err(|e| Error::Config(format!("{}: {e}", path.display())))
    }
}

/// Resolved settings shared by all subcommands.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub stoplist_path: Option<PathBuf>,
    pub keywords_path: Option<PathBuf>,
    pub window: usize,
    pub top_docs: usize,
    pub top_k: usize,
    pub query_budget: usize,
    pub mode: Mode,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            stoplist_path: None,
            keywords_path: None,
            window: DEFAULT_WINDOW,
            top_docs: 5,
            top_k: 5,
            query_budget: 10,
            mode: Mode::All,
        }
    }
}

impl Config {
    pub fn with_file(mut self, file: ConfigFile) -> Result<Self> {
        if let Some(p) = file.stoplist_path {
            self.stoplist_path = Some(p);
        }
        if let Some(p) = file.keywords_path {
            self.keywords_path = Some(p);
        }
        self.window = file.window.unwrap_or(self.window);
        self.top_docs = file.top_docs.unwrap_or(self.top_docs);
        self.top_k = file.top_k.unwrap_or(self.top_k);
        self.query_budget = file.query_budget.unwrap_or(self.query_budget);
        if let Some(m) = file.mode {
            self.mode = m.parse().map_err(Error::Config)?;
        }
        Ok(self)
    }

    pub fn validate(&self) -> Result<()> {
        let checks = [
            ("window", self.window, 2),
            ("top_docs", self.top_docs, 1),
            ("top_k", self.top_k, 1),
            ("query_budget", self.query_budget, 1),
        ];
        for (name, value, min) in checks {
            if value < min {
                return Err(Error::Config(format!("{name} must be at least {min}, got {value}")));
            }
        }
        Ok(())
    }

    pub fn stoplist(&self) -> Result<StopList> {
        match &self.stoplist_path {
            Some(p) => StopList::load(p),
            None => Ok(StopList::default_stopwords()),
        }
    }

    pub fn keywords(&self) -> Result<WordList> {
        match &self.keywords_path {
            Some(p) => WordList::load(p),
            None => Ok(java_keywords()),
        }
    }

    pub fn reformulator_config(&self) -> ReformulatorConfig {
        ReformulatorConfig {
            top_docs: self.top_docs,
            top_k: self.top_k,
            budget: self.query_budget,
            ..ReformulatorConfig::default()
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "quickar", version, about = "Query reformulation for code search using crowd co-occurrence data")]
struct Cli {
    /// TOML file with default settings; flags override it.
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Build a word adjacency database from a question-title dump.
    BuildDb(BuildDbArgs),
    /// Index a source tree into method-level documents.
    Index(IndexArgs),
    /// Run a free-text query against an index.
    Search(SearchArgs),
    /// Reformulate a change-request title.
    Reformulate(ReformulateArgs),
    /// Evaluate strategies against a set of queries with known answers.
    Evaluate(EvaluateArgs),
}

#[derive(Debug, Args)]
struct BuildDbArgs {
    /// TSV dump: `question_id<TAB>title<TAB>tag1;tag2`.
    #[arg(long)]
    dump: PathBuf,
    /// Keep only titles carrying this tag.
    #[arg(long, default_value = "java")]
    tag: String,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    window: Option<usize>,
    /// Stop after this many matching titles.
    #[arg(long)]
    limit: Option<usize>,
    /// Count each pair at most once per title.
    #[arg(long)]
    binary: bool,
    #[arg(long)]
    stoplist: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Debug, Args)]
#[command(group = clap::ArgGroup::new("input").required(true).args(["src", "pre_split"]))]
struct IndexArgs {
    /// Source tree to split into methods.
    #[arg(long)]
    src: Option<PathBuf>,
    /// Directory holding one document per file; bypasses method splitting.
    #[arg(long)]
    pre_split: Option<PathBuf>,
    #[arg(long)]
    out: PathBuf,
    /// Language keyword list removed from documents.
    #[arg(long)]
    keywords: Option<PathBuf>,
    #[arg(long)]
    stoplist: Option<PathBuf>,
    /// Drop comments before indexing.
    #[arg(long)]
    strip_comments: bool,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long)]
    query: String,
    #[arg(long, default_value_t = 10)]
    top: usize,
    /// Ignore query terms the index has never seen.
    #[arg(long)]
    drop_unknown: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
enum StrategyArg {
    Quickar,
    Rocchio,
    Baseline,
}

#[derive(Debug, Args)]
struct ReformulateArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long)]
    db: PathBuf,
    #[arg(long)]
    query: String,
    /// all, p, so or red.
    #[arg(long)]
    mode: Option<Mode>,
    #[arg(long, value_enum, default_value_t = StrategyArg::Quickar)]
    strategy: StrategyArg,
    #[arg(long)]
    json: bool,
    #[arg(long)]
    stoplist: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct EvaluateArgs {
    #[arg(long)]
    index: PathBuf,
    #[arg(long)]
    db: PathBuf,
    /// TSV: `query_id<TAB>title<TAB>gold1;gold2`.
    #[arg(long)]
    queries: PathBuf,
    #[arg(long, value_delimiter = ',', default_value = "all,p,so,red,rocchio")]
    strategies: Vec<Strategy>,
    /// Leave excluded queries out of percentage denominators.
    #[arg(long)]
    strict: bool,
    /// Always expand, even when reduction alone already improves the rank.
    #[arg(long)]
    no_skip: bool,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    stoplist: Option<PathBuf>,
    #[arg(long, default_value_t = 0)]
    jobs: usize,
}

/// Runs the tool with the process's stdout and stderr.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let stdout = io::stdout();
    let stderr = io::stderr();
    run_with(args, &mut stdout.lock(), &mut stderr.lock())
}

/// Parses `args` (program name first), runs the subcommand and returns the
/// exit code.
pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = out.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = err.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli, out, err) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            EXIT_DATA
        }
    }
}

fn dispatch(cli: Cli, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let mut config = Config::default();
    if let Some(path) = &cli.config {
        config = config.with_file(ConfigFile::load(path)?)?;
    }
    match cli.command {
        Command::BuildDb(args) => {
            if let Some(w) = args.window {
                config.window = w;
            }
            override_path(&mut config.stoplist_path, args.stoplist.clone());
            config.validate()?;
            build_db(&args, &config, out, err)
        }
        Command::Index(args) => {
            override_path(&mut config.stoplist_path, args.stoplist.clone());
            override_path(&mut config.keywords_path, args.keywords.clone());
            config.validate()?;
            index(&args, &config, out, err)
        }
        Command::Search(args) => {
            config.validate()?;
            search(&args, &config, out)
        }
        Command::Reformulate(args) => {
            override_path(&mut config.stoplist_path, args.stoplist.clone());
            if let Some(m) = args.mode {
                config.mode = m;
            }
            config.validate()?;
            reformulate(&args, &config, out, err)
        }
        Command::Evaluate(args) => {
            override_path(&mut config.stoplist_path, args.stoplist.clone());
            config.validate()?;
            evaluate(&args, &config, out, err)
        }
    }
}

fn override_path(slot: &mut Option<PathBuf>, flag: Option<PathBuf>) {
    if flag.is_some() {
        *slot = flag;
    }
}

/// Runs `f` on a dedicated pool of `jobs` threads (`0` picks the default).
fn in_pool<R: Send>(jobs: usize, f: impl FnOnce() -> Result<R> + Send) -> Result<R> {
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(jobs)
        .build()
        .map_err(|e| Error::Config(format!("cannot start {jobs} workers: {e}")))?;
    pool.install(f)
}

fn build_db(args: &BuildDbArgs, config: &Config, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let stops = config.stoplist()?;
    let file = File::open(&args.dump).map_err(|e| Error::io(&args.dump, e))?;
    let mut titles = filter_titles(read_dump(BufReader::new(file)), &args.tag);
    let kept: Vec<TitleRecord> = titles.by_ref().take(args.limit.unwrap_or(usize::MAX)).collect();
    for bad in titles.malformed() {
        if bad.line == 0 {
            let _ = writeln!(err, "warning: {}: {}", args.dump.display(), bad.reason);
        } else {
            let _ = writeln!(err, "warning: {}:{}: {}", args.dump.display(), bad.line, bad.reason);
        }
    }
    let mut meta = DbMeta::new(config.window, &stops, args.dump.display().to_string());
    if args.binary {
        meta.counting = Counting::Binary;
    }
    let db = in_pool(args.jobs, || Ok(AdjacencyDatabase::build_parallel(&kept, &stops, meta)))?;
    db.save(&args.out)?;
    let _ = writeln!(
        out,
        "{} titles, {} words, {} pairs -> {}",
        kept.len(),
        db.vocab_size(),
        db.total_pair_count(),
        args.out.display()
    );
    Ok(())
}

fn index(args: &IndexArgs, config: &Config, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let opts = CorpusOptions {
        stops: config.stoplist()?,
        keywords: config.keywords()?,
        strip_comments: args.strip_comments,
        ..CorpusOptions::default()
    };
    let build = in_pool(args.jobs, || match (&args.src, &args.pre_split) {
        (Some(src), None) => build_corpus(src, &opts),
        (None, Some(dir)) => build_presplit_corpus(dir, &opts),
        _ => Err(Error::Config("give exactly one of --src or --pre-split".into())),
    })?;
    for w in &build.warnings {
        let _ = writeln!(err, "warning: {w}");
    }
    build.corpus.save(&args.out)?;
    let _ = writeln!(
        out,
        "{} files, {} documents -> {}",
        build.files,
        build.corpus.n_docs(),
        args.out.display()
    );
    Ok(())
}

fn search(args: &SearchArgs, config: &Config, out: &mut dyn Write) -> Result<()> {
    let corpus = Corpus::load(&args.index)?;
    let _ = config;
    let seq = preprocess(&args.query, &StopList::empty(), SplitMode::SplitAndKeepWhole);
    let opts = SearchOptions {
        top_n: Some(args.top),
        drop_unknown: args.drop_unknown,
    };
    for hit in search_terms(&corpus, seq.normalized(), opts)? {
        let _ = writeln!(out, "{}\t{}\t{:.6}", hit.rank, hit.doc_id, hit.score);
    }
    Ok(())
}

#[derive(Serialize)]
struct RenderedReformulation<'a> {
    #[serde(flatten)]
    reformulation: &'a Reformulation,
    rendered_query: String,
}

fn reformulate(args: &ReformulateArgs, config: &Config, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let stops = config.stoplist()?;
    let corpus = Corpus::load(&args.index)?;
    let db = AdjacencyDatabase::load(&args.db)?;
    if db.meta().stoplist_sha != corpus.meta().stoplist_sha {
        let _ = writeln!(err, "warning: index and database were built with different stop lists");
    }
    let q = QueryRecord::new("query", args.query.as_str());
    let oracle = LexiconNounOracle::default();
    let reformulator = Reformulator::new(&corpus, &db, &stops, &oracle).with_config(config.reformulator_config());
    let results = match args.strategy {
        StrategyArg::Quickar if config.mode == Mode::ReductionOnly => {
            vec![reformulator.reformulate(&q, Mode::ReductionOnly)?]
        }
        // Without relevance information both variants are offered.
        StrategyArg::Quickar => vec![
            reformulator.reformulate(&q, Mode::ReductionOnly)?,
            reformulator.reformulate(&q, config.mode)?,
        ],
        StrategyArg::Rocchio => {
            let cfg = RocchioConfig {
                top_docs: config.top_docs,
                expansion_count: None,
                budget: config.query_budget,
            };
            vec![rocchio_expand(&q, &corpus, &stops, cfg)?]
        }
        StrategyArg::Baseline => vec![preprocessed_baseline(&q, &stops)?],
    };
    if args.json {
        let rendered: Vec<RenderedReformulation<'_>> = results
            .iter()
            .map(|r| RenderedReformulation {
                reformulation: r,
                rendered_query: r.rendered_query(),
            })
            .collect();
        let json = serde_json::to_string_pretty(&rendered).map_err(|e| Error::Config(e.to_string()))?;
        let _ = writeln!(out, "{json}");
    } else {
        for r in &results {
            let _ = writeln!(out, "{}\t{}", r.strategy, r.rendered_query());
        }
    }
    Ok(())
}

fn evaluate(args: &EvaluateArgs, config: &Config, out: &mut dyn Write, err: &mut dyn Write) -> Result<()> {
    let stops = config.stoplist()?;
    let corpus = Corpus::load(&args.index)?;
    let db = AdjacencyDatabase::load(&args.db)?;
    if db.meta().stoplist_sha != corpus.meta().stoplist_sha {
        let _ = writeln!(err, "warning: index and database were built with different stop lists");
    }
    let queries = read_queries(&args.queries)?;
    let oracle = LexiconNounOracle::default();
    let reformulator = Reformulator::new(&corpus, &db, &stops, &oracle).with_config(config.reformulator_config());
    let mut evaluator = Evaluator::new(reformulator);
    evaluator.skip_expansion_when_reduction_improves = !args.no_skip;
    let report = in_pool(args.jobs, || run_evaluation(&evaluator, &queries, &args.strategies, args.strict))?;
    emit_report(&report, &args.out)?;
    let _ = out.write_all(report.to_text().as_bytes());
    Ok(())
}
