//! Word-adjacency database mined from question titles.
//!
//! Every title is preprocessed into a term sequence and each pair of distinct
//! terms closer than the window size is counted once per occurrence, in both
//! directions. A word's row is its adjacency list; the rows feed both the
//! contextual cosine similarity and the raw co-occurrence frequency used when
//! scoring expansion candidates.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufRead, BufWriter, Write};
use std::path::Path;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::textprep::{preprocess, SplitMode, StopList};

pub const DEFAULT_WINDOW: usize = 2;

/// One line of a question dump.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct TitleRecord {
    pub question_id: u64,
    pub title: String,
    pub tags: Vec<String>,
}

/// A dump line that could not be parsed.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MalformedRecord {
    pub line: usize,
    pub reason: String,
}

impl TitleRecord {
    /// Parses `question_id<TAB>title<TAB>tag1;tag2;...`. Tags are lower-cased.
    pub fn parse_line(line: &str) -> Result<Self, String> {
        let mut fields = line.split('\t');
        let (Some(id), Some(title), Some(tags), None) =
            (fields.next(), fields.next(), fields.next(), fields.next())
        else {
            return Err(String::from("expected 3 tab-separated fields"));
        };
        let question_id = id
            .trim()
            .parse()
            .map_err(|_| format!("bad question id {id:?}"))?;
        let tags = tags
            .split(';')
            .map(|t| t.trim().to_lowercase())
            .filter(|t| !t.is_empty())
            .collect();
        Ok(TitleRecord {
            question_id,
            title: title.to_owned(),
            tags,
        })
    }
}

/// Streams records out of a TSV dump. Blank lines are skipped; every other
/// line yields either a record or a [`MalformedRecord`].
pub fn read_dump<R: BufRead>(
    reader: R,
) -> impl Iterator<Item = Result<TitleRecord, MalformedRecord>> {
    reader
        .lines()
        .enumerate()
        .filter_map(|(idx, line)| {
            let line_no = idx + 1;
            match line {
                Err(e) => Some(Err(MalformedRecord {
                    line: line_no,
                    reason: e.to_string(),
                })),
                Ok(text) if text.trim().is_empty() => None,
                Ok(text) => Some(
                    TitleRecord::parse_line(text.trim_end_matches('\r')).map_err(|reason| {
                        MalformedRecord {
                            line: line_no,
                            reason,
                        }
                    }),
                ),
            }
        })
}

/// Keeps records carrying `required_tag`. Malformed records and repeated
/// question ids are skipped and counted rather than aborting the stream.
pub fn filter_titles<I>(dump: I, required_tag: &str) -> TitleFilter<I::IntoIter>
where
    I: IntoIterator<Item = Result<TitleRecord, MalformedRecord>>,
{
    TitleFilter {
        inner: dump.into_iter(),
        tag: required_tag.to_lowercase(),
        seen: HashSet::new(),
        malformed: Vec::new(),
    }
}

pub struct TitleFilter<I> {
    inner: I,
    tag: String,
    seen: HashSet<u64>,
    malformed: Vec<MalformedRecord>,
}

impl<I> TitleFilter<I> {
    pub fn malformed(&self) -> &[MalformedRecord] {
        &self.malformed
    }
}

impl<I> Iterator for TitleFilter<I>
where
    I: Iterator<Item = Result<TitleRecord, MalformedRecord>>,
{
    type Item = TitleRecord;

    fn next(&mut self) -> Option<TitleRecord> {
        for item in self.inner.by_ref() {
            match item {
                Err(bad) => self.malformed.push(bad),
                Ok(record) => {
                    if !self.seen.insert(record.question_id) {
                        self.malformed.push(MalformedRecord {
                            line: 0,
                            reason: format!("duplicate question id {}", record.question_id),
                        });
                        continue;
                    }
                    if record.tags.contains(&self.tag) {
                        return Some(record);
                    }
                }
            }
        }
        None
    }
}

/// How pair occurrences turn into stored weights.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Counting {
    /// Every windowed occurrence adds one.
    #[default]
    Occurrences,
    /// Any number of occurrences is stored as 1.
    Binary,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DbMeta {
    pub window: usize,
    pub stoplist_sha: String,
    pub source: String,
    pub counting: Counting,
}

impl DbMeta {
    pub fn new(window: usize, stops: &StopList, source: impl Into<String>) -> Self {
        DbMeta {
            window,
            stoplist_sha: stops.sha256_hex(),
            source: source.into(),
            counting: Counting::Occurrences,
        }
    }
}

type Row = BTreeMap<String, u64>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct AdjacencyDatabase {
    entries: BTreeMap<String, Row>,
    meta: DbMeta,
}

/// Borrowed adjacency list of one word. Out-of-vocabulary words get an empty
/// vector.
#[derive(Debug, Clone, Copy)]
pub struct AdjacencyVector<'a> {
    pub owner: &'a str,
    pub weights: &'a BTreeMap<String, u64>,
}

static EMPTY_ROW: Row = BTreeMap::new();

impl<'a> AdjacencyVector<'a> {
    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }

    pub fn norm(&self) -> f64 {
        self.weights
            .values()
            .map(|&c| (c as f64) * (c as f64))
            .sum::<f64>()
            .sqrt()
    }

    pub fn dot(&self, other: &AdjacencyVector<'_>) -> f64 {
        let (small, large) = if self.weights.len() <= other.weights.len() {
            (self.weights, other.weights)
        } else {
            (other.weights, self.weights)
        };
        small
            .iter()
            .filter_map(|(w, &a)| large.get(w).map(|&b| a as f64 * b as f64))
            .sum()
    }

    /// Cosine similarity of two count-weighted adjacency vectors; 0 when
    /// either is empty.
    pub fn cosine(&self, other: &AdjacencyVector<'_>) -> f64 {
        if self.is_empty() || other.is_empty() {
            return 0.0;
        }
        let dot = self.dot(other);
        if dot == 0.0 {
            return 0.0;
        }
        dot / (self.norm() * other.norm())
    }
}

impl AdjacencyDatabase {
    pub fn empty(meta: DbMeta) -> Self {
        AdjacencyDatabase {
            entries: BTreeMap::new(),
            meta,
        }
    }

    pub fn meta(&self) -> &DbMeta {
        &self.meta
    }

    pub fn vocab_size(&self) -> usize {
        self.entries.len()
    }

    /// Sum of counts over unordered pairs.
    pub fn total_pair_count(&self) -> u64 {
        self.entries.values().flat_map(|row| row.values()).sum::<u64>() / 2
    }

    pub fn contains(&self, word: &str) -> bool {
        self.entries.contains_key(word)
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.entries.keys().map(String::as_str)
    }

    pub fn neighbors<'a>(&'a self, word: &'a str) -> AdjacencyVector<'a> {
        AdjacencyVector {
            owner: word,
            weights: self.entries.get(word).unwrap_or(&EMPTY_ROW),
        }
    }

    pub fn cooccurrence_count(&self, a: &str, b: &str) -> u64 {
        self.entries
            .get(a)
            .and_then(|row| row.get(b))
            .copied()
            .unwrap_or(0)
    }

    /// Sums the counts of `other` into `self`. Building from a concatenated
    /// stream equals merging the builds of its parts.
    pub fn merge(mut self, other: &AdjacencyDatabase) -> Self {
        for (word, row) in &other.entries {
            let mine = self.entries.entry(word.clone()).or_default();
            for (neighbor, &count) in row {
                *mine.entry(neighbor.clone()).or_default() += count;
            }
        }
        if self.meta.counting == Counting::Binary {
            self.entries
                .values_mut()
                .flat_map(|row| row.values_mut())
                .for_each(|c| *c = 1);
        }
        self
    }

    /// Builds the database from already tag-filtered titles.
    pub fn build<I>(titles: I, stops: &StopList, meta: DbMeta) -> Self
    where
        I: IntoIterator<Item = TitleRecord>,
    {
        let mut builder = PairCounter::new(meta.window);
        for record in titles {
            builder.add_title(&record.title, stops);
        }
        builder.finish(meta)
    }

    /// Parallel build over the current rayon pool. The result does not depend
    /// on the number of worker threads.
    pub fn build_parallel(titles: &[TitleRecord], stops: &StopList, meta: DbMeta) -> Self {
        let window = meta.window;
        let counter = titles
            .par_chunks(1024)
            .fold(
                || PairCounter::new(window),
                |mut acc, chunk| {
                    for record in chunk {
                        acc.add_title(&record.title, stops);
                    }
                    acc
                },
            )
            .reduce(|| PairCounter::new(window), PairCounter::merge);
        counter.finish(meta)
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = BufWriter::new(file);
        out.write_all(self.to_text().as_bytes())
            .and_then(|_| out.flush())
            .map_err(|e| Error::io(path, e))
    }

    /// Serializes to the line-oriented text format; byte-stable for equal
    /// databases.
    pub fn to_text(&self) -> String {
        let mut text = String::new();
        let _ = writeln!(text, "#window={}", self.meta.window);
        let _ = writeln!(text, "#stoplist_sha={}", self.meta.stoplist_sha);
        let _ = writeln!(text, "#source={}", single_line(&self.meta.source));
        if self.meta.counting == Counting::Binary {
            text.push_str("#counting=binary\n");
        }
        for (word, row) in &self.entries {
            text.push_str(word);
            text.push('\t');
            for (i, (neighbor, count)) in row.iter().enumerate() {
                if i > 0 {
                    text.push(',');
                }
                let _ = write!(text, "{neighbor}:{count}");
            }
            text.push('\n');
        }
        let _ = writeln!(text, "#pairs={}", self.total_pair_count());
        text
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_text(&text).map_err(|reason| Error::corrupt(path, reason))
    }

    pub fn from_text(text: &str) -> Result<Self, String> {
        let mut window = None;
        let mut stoplist_sha = None;
        let mut source = None;
        let mut counting = Counting::Occurrences;
        let mut declared_pairs = None;
        let mut entries: BTreeMap<String, Row> = BTreeMap::new();

        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            if declared_pairs.is_some() {
                return Err(format!("line {line_no}: content after #pairs trailer"));
            }
            if let Some(header) = line.strip_prefix('#') {
                let (key, value) = header
                    .split_once('=')
                    .ok_or_else(|| format!("line {line_no}: malformed header"))?;
                match key {
                    "window" => {
                        window = Some(
                            value
                                .parse::<usize>()
                                .map_err(|_| format!("line {line_no}: bad window"))?,
                        )
                    }
                    "stoplist_sha" => stoplist_sha = Some(value.to_owned()),
                    "source" => source = Some(value.to_owned()),
                    "counting" if value == "binary" => counting = Counting::Binary,
                    "pairs" => {
                        declared_pairs = Some(
                            value
                                .parse::<u64>()
                                .map_err(|_| format!("line {line_no}: bad pair count"))?,
                        )
                    }
                    _ => return Err(format!("line {line_no}: unknown header {key:?}")),
                }
                continue;
            }
            let (word, list) = line
                .split_once('\t')
                .ok_or_else(|| format!("line {line_no}: missing tab"))?;
            let mut row = Row::new();
            for item in list.split(',') {
                let (neighbor, count) = item
                    .rsplit_once(':')
                    .ok_or_else(|| format!("line {line_no}: bad entry {item:?}"))?;
                let count: u64 = count
                    .parse()
                    .map_err(|_| format!("line {line_no}: bad count {count:?}"))?;
                if count == 0 || neighbor == word || neighbor.is_empty() {
                    return Err(format!("line {line_no}: invalid entry {item:?}"));
                }
                row.insert(neighbor.to_owned(), count);
            }
            if entries.insert(word.to_owned(), row).is_some() {
                return Err(format!("line {line_no}: duplicate word {word:?}"));
            }
        }

        let declared = declared_pairs.ok_or("missing #pairs trailer (truncated file?)")?;
        let meta = DbMeta {
            window: window.ok_or("missing #window header")?,
            stoplist_sha: stoplist_sha.ok_or("missing #stoplist_sha header")?,
            source: source.ok_or("missing #source header")?,
            counting,
        };
        let db = AdjacencyDatabase { entries, meta };
        for (word, row) in &db.entries {
            for (neighbor, &count) in row {
                if db.cooccurrence_count(neighbor, word) != count {
                    return Err(format!("asymmetric pair {word:?}/{neighbor:?}"));
                }
            }
        }
        if db.total_pair_count() != declared {
            return Err(format!(
                "pair checksum mismatch: header says {declared}, body has {}",
                db.total_pair_count()
            ));
        }
        Ok(db)
    }
}

fn single_line(s: &str) -> String {
    s.replace(['\n', '\r'], " ")
}

/// Accumulates windowed pair counts. Mergeable, so partitions of a title
/// stream can be counted independently.
#[derive(Debug, Clone)]
pub struct PairCounter {
    window: usize,
    counts: HashMap<String, HashMap<String, u64>>,
}

impl PairCounter {
    pub fn new(window: usize) -> Self {
        PairCounter {
            window: window.max(2),
            counts: HashMap::new(),
        }
    }

    pub fn add_title(&mut self, title: &str, stops: &StopList) {
        let seq = preprocess(title, stops, SplitMode::SplitOnly);
        let terms: Vec<&str> = seq.normalized().collect();
        self.add_terms(&terms);
    }

    /// Counts every pair of positions `i < j` with `j - i < window` whose
    /// words differ.
    pub fn add_terms(&mut self, terms: &[&str]) {
        for (i, &a) in terms.iter().enumerate() {
            for &b in terms.iter().skip(i + 1).take(self.window - 1) {
                if a == b {
                    continue;
                }
                self.bump(a, b);
                self.bump(b, a);
            }
        }
    }

    fn bump(&mut self, a: &str, b: &str) {
        let row = match self.counts.get_mut(a) {
            Some(row) => row,
            None => self.counts.entry(a.to_owned()).or_default(),
        };
        match row.get_mut(b) {
            Some(count) => *count += 1,
            None => {
                row.insert(b.to_owned(), 1);
            }
        }
    }

    pub fn merge(mut self, other: PairCounter) -> PairCounter {
        if self.counts.len() < other.counts.len() {
            return other.merge(self);
        }
        for (word, row) in other.counts {
            let mine = self.counts.entry(word).or_default();
            for (neighbor, count) in row {
                *mine.entry(neighbor).or_default() += count;
            }
        }
        self
    }

    pub fn finish(self, meta: DbMeta) -> AdjacencyDatabase {
        let binary = meta.counting == Counting::Binary;
        let entries = self
            .counts
            .into_iter()
            .map(|(word, row)| {
                let row = row
                    .into_iter()
                    .map(|(n, c)| (n, if binary { 1 } else { c }))
                    .collect();
                (word, row)
            })
            .collect();
        AdjacencyDatabase { entries, meta }
    }
}
