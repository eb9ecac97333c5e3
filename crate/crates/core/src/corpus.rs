//! Method-level source corpus.
//!
//! Source files are cut into method units by a lightweight brace-matching
//! splitter, each unit is preprocessed into terms, and the per-document term
//! counts plus corpus-wide document frequencies are kept for retrieval and for
//! the document-frequency reduction rule.
//!
//! The splitter does not parse the language. It blanks comments and literal
//! contents, tracks brace nesting, and classifies each `{` by the text that
//! precedes it: a type declaration, a method or constructor signature directly
//! inside a type body, or anything else. Only outermost methods become units;
//! local and anonymous classes stay inside their enclosing method.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::sync::OnceLock;

use rayon::prelude::*;
use walkdir::WalkDir;

use crate::error::{Error, Result};
use crate::textprep::{preprocess, Origin, SplitMode, StopList, WordList};

const JAVA_KEYWORDS: &str = include_str!("../data/java_keywords.txt");

/// Name given to the single unit produced when a file is indexed whole.
pub const WHOLE_FILE: &str = "<file>";

pub fn java_keywords() -> WordList {
    WordList::parse(JAVA_KEYWORDS, "<bundled:java_keywords.txt>")
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MethodUnit {
    pub name: String,
    /// Signature plus balanced body, including any leading annotations and
    /// doc comments.
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SplitOutcome {
    pub units: Vec<MethodUnit>,
    /// Set when the file fell back to a single whole-file unit because its
    /// braces do not balance.
    pub warning: Option<String>,
}

impl SplitOutcome {
    pub fn is_whole_file(&self) -> bool {
        self.units.len() == 1 && self.units[0].name == WHOLE_FILE
    }
}

/// Splits a curly-brace source file into method units.
///
/// Files without any recognizable method, and files whose braces do not
/// balance, yield a single [`WHOLE_FILE`] unit.
pub fn split_methods(source: &str) -> SplitOutcome {
    split_methods_with(source, false)
}

/// Like [`split_methods`], optionally blanking comments in the unit text.
pub fn split_methods_with(source: &str, strip_comments: bool) -> SplitOutcome {
    let masked = mask(source);
    let text_src = if strip_comments {
        masked.without_comments.as_str()
    } else {
        source
    };
    let whole = |warning: Option<String>| SplitOutcome {
        units: vec![MethodUnit {
            name: WHOLE_FILE.to_owned(),
            text: text_src.to_owned(),
        }],
        warning,
    };

    let code = masked.code.as_bytes();
    let mut stack: Vec<Block> = Vec::new();
    let mut units = Vec::new();
    let mut seg_start = 0;
    for (i, &b) in code.iter().enumerate() {
        match b {
            b'{' => {
                let inside_method = stack.iter().any(|blk| blk.kind == BlockKind::Method);
                let parent_is_type = stack
                    .last()
                    .is_some_and(|blk| blk.kind == BlockKind::Type);
                let header = &masked.code[seg_start..i];
                let kind = match classify(header) {
                    Header::Type => BlockKind::Type,
                    Header::Method(name) if parent_is_type && !inside_method => {
                        let segment = &text_src[seg_start..i];
                        let lead = segment.len() - segment.trim_start().len();
                        stack.push(Block {
                            kind: BlockKind::Method,
                            start: seg_start + lead,
                            name: name.to_owned(),
                        });
                        seg_start = i + 1;
                        continue;
                    }
                    _ => BlockKind::Other,
                };
                stack.push(Block {
                    kind,
                    start: i,
                    name: String::new(),
                });
                seg_start = i + 1;
            }
            b'}' => {
                let Some(block) = stack.pop() else {
                    return whole(Some(format!("unbalanced '}}' at byte {i}")));
                };
                if block.kind == BlockKind::Method {
                    units.push(MethodUnit {
                        name: block.name,
                        text: text_src[block.start..=i].to_owned(),
                    });
                }
                seg_start = i + 1;
            }
            b';' => seg_start = i + 1,
            _ => {}
        }
    }
    if !stack.is_empty() {
        return whole(Some(format!("{} unclosed '{{'", stack.len())));
    }
    if units.is_empty() {
        return whole(None);
    }
    SplitOutcome {
        units,
        warning: None,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum BlockKind {
    Type,
    Method,
    Other,
}

struct Block {
    kind: BlockKind,
    start: usize,
    name: String,
}

enum Header<'a> {
    Type,
    Method(&'a str),
    Other,
}

const TYPE_KEYWORDS: [&str; 4] = ["class", "interface", "enum", "record"];
const NOT_METHOD_NAMES: [&str; 12] = [
    "if", "for", "while", "switch", "catch", "synchronized", "return", "new", "try", "else",
    "do", "throw",
];

fn is_ident_byte(b: u8) -> bool {
    b.is_ascii_alphanumeric() || b == b'_' || b == b'$' || b >= 0x80
}

/// Identifiers that sit outside any parentheses, skipping member accesses
/// such as `Foo.class`.
fn top_level_words(header: &str) -> Vec<&str> {
    let bytes = header.as_bytes();
    let mut words = Vec::new();
    let mut depth = 0i32;
    let mut i = 0;
    while i < bytes.len() {
        let b = bytes[i];
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            _ if is_ident_byte(b) => {
                let start = i;
                while i < bytes.len() && is_ident_byte(bytes[i]) {
                    i += 1;
                }
                let after_dot = header[..start].trim_end().ends_with('.');
                if depth == 0 && !after_dot {
                    words.push(&header[start..i]);
                }
                continue;
            }
            _ => {}
        }
        i += 1;
    }
    words
}

fn classify(header: &str) -> Header<'_> {
    let words = top_level_words(header);
    // `record` and friends only declare a type when a name follows them.
    let declares_type = words
        .iter()
        .enumerate()
        .any(|(i, w)| TYPE_KEYWORDS.contains(w) && i + 1 < words.len());
    if declares_type {
        return Header::Type;
    }
    let mut sig = header.trim_end();
    // Drop a trailing `throws A, b.C` clause.
    if let Some(pos) = words.iter().rposition(|w| *w == "throws") {
        let w = words[pos];
        let offset = w.as_ptr() as usize - header.as_ptr() as usize;
        let rest = &header[offset + w.len()..];
        if rest
            .bytes()
            .all(|b| is_ident_byte(b) || b".,<> \t\r\n".contains(&b))
        {
            sig = header[..offset].trim_end();
        }
    }
    let Some(body) = sig.strip_suffix(')') else {
        return Header::Other;
    };
    // Find the '(' matching the final ')'.
    let bytes = body.as_bytes();
    let mut depth = 0;
    let mut open = None;
    for (i, &b) in bytes.iter().enumerate().rev() {
        match b {
            b')' => depth += 1,
            b'(' if depth == 0 => {
                open = Some(i);
                break;
            }
            b'(' => depth -= 1,
            _ => {}
        }
    }
    let Some(open) = open else {
        return Header::Other;
    };
    let params = &body[open + 1..];
    let before = body[..open].trim_end();
    let name_start = before
        .bytes()
        .rposition(|b| !is_ident_byte(b))
        .map_or(0, |p| p + 1);
    let name = &before[name_start..];
    if name.is_empty()
        || name.as_bytes()[0].is_ascii_digit()
        || NOT_METHOD_NAMES.contains(&name)
    {
        return Header::Other;
    }
    let prefix = before[..name_start].trim_end();
    if prefix.ends_with('.') || prefix.ends_with("new") || prefix.contains("->") {
        return Header::Other;
    }
    if has_top_level(prefix, b'=') {
        return Header::Other;
    }
    if !params_look_declared(params) {
        return Header::Other;
    }
    Header::Method(name)
}

fn has_top_level(text: &str, target: u8) -> bool {
    let mut depth = 0i32;
    for b in text.bytes() {
        match b {
            b'(' => depth += 1,
            b')' => depth -= 1,
            _ if b == target && depth == 0 => return true,
            _ => {}
        }
    }
    false
}

/// A declaration's parameters are empty or each have at least a type and a
/// name. Call arguments such as `A(1)` or `foo(bar)` do not.
fn params_look_declared(params: &str) -> bool {
    if params.trim().is_empty() {
        return true;
    }
    let mut depth = 0i32;
    let mut pieces = Vec::new();
    let mut start = 0;
    for (i, b) in params.bytes().enumerate() {
        match b {
            b'<' | b'(' => depth += 1,
            b'>' | b')' => depth -= 1,
            b',' if depth == 0 => {
                pieces.push(&params[start..i]);
                start = i + 1;
            }
            _ => {}
        }
    }
    pieces.push(&params[start..]);
    pieces.iter().all(|piece| {
        let idents = piece
            .split(|c: char| !(c.is_alphanumeric() || c == '_' || c == '$'))
            .filter(|w| !w.is_empty())
            .count();
        idents >= 2 && !piece.contains('"') && !piece.contains('\'')
    })
}

struct Masked {
    /// Comments and literal contents replaced by spaces.
    code: String,
    /// Only comments replaced by spaces.
    without_comments: String,
}

/// Blanks comments and string/char literal contents byte-for-byte so offsets
/// stay aligned with the original text. Quote characters are kept.
fn mask(source: &str) -> Masked {
    #[derive(PartialEq)]
    enum State {
        Code,
        Line,
        Block,
        Str,
        Char,
        TextBlock,
    }
    let src = source.as_bytes();
    let mut code = src.to_vec();
    let mut nocomment = src.to_vec();
    let mut state = State::Code;
    let mut i = 0;
    let blank = |buf: &mut Vec<u8>, i: usize| {
        if buf[i] != b'\n' {
            buf[i] = b' ';
        }
    };
    while i < src.len() {
        let b = src[i];
        let next = src.get(i + 1).copied();
        match state {
            State::Code => match (b, next) {
                (b'/', Some(b'/')) => {
                    state = State::Line;
                    continue;
                }
                (b'/', Some(b'*')) => {
                    blank(&mut code, i);
                    blank(&mut nocomment, i);
                    blank(&mut code, i + 1);
                    blank(&mut nocomment, i + 1);
                    state = State::Block;
                    i += 2;
                    continue;
                }
                (b'"', _) if src[i..].starts_with(b"\"\"\"") => {
                    state = State::TextBlock;
                    i += 3;
                    continue;
                }
                (b'"', _) => state = State::Str,
                (b'\'', _) => state = State::Char,
                _ => {}
            },
            State::Line => {
                if b == b'\n' {
                    state = State::Code;
                } else {
                    blank(&mut code, i);
                    blank(&mut nocomment, i);
                }
            }
            State::Block => {
                blank(&mut code, i);
                blank(&mut nocomment, i);
                if b == b'*' && next == Some(b'/') {
                    blank(&mut code, i + 1);
                    blank(&mut nocomment, i + 1);
                    state = State::Code;
                    i += 2;
                    continue;
                }
            }
            State::Str | State::Char => {
                let quote = if state == State::Str { b'"' } else { b'\'' };
                if b == b'\\' {
                    blank(&mut code, i);
                    if next.is_some() {
                        blank(&mut code, i + 1);
                    }
                    i += 2;
                    continue;
                }
                if b == quote || b == b'\n' {
                    state = State::Code;
                } else {
                    blank(&mut code, i);
                }
            }
            State::TextBlock => {
                if src[i..].starts_with(b"\"\"\"") {
                    state = State::Code;
                    i += 3;
                    continue;
                }
                if b == b'\\' && next.is_some() {
                    blank(&mut code, i);
                    blank(&mut code, i + 1);
                    i += 2;
                    continue;
                }
                blank(&mut code, i);
            }
        }
        i += 1;
    }
    // Only ASCII structure bytes and whole UTF-8 sequences inside comments or
    // literals were replaced, so both buffers remain valid UTF-8.
    Masked {
        code: String::from_utf8(code).unwrap_or_default(),
        without_comments: String::from_utf8(nocomment).unwrap_or_default(),
    }
}

/// A method-level document.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Document {
    pub doc_id: String,
    pub term_counts: BTreeMap<String, u32>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CorpusMeta {
    pub stoplist_sha: String,
    pub keywords_sha: String,
    pub source: String,
}

pub struct Corpus {
    documents: Vec<Document>,
    doc_freq: BTreeMap<String, u32>,
    /// Canonical surface form of every term seen as a camel part or as a
    /// compound identifier.
    identifiers: BTreeMap<String, String>,
    postings: BTreeMap<String, Vec<(u32, u32)>>,
    meta: CorpusMeta,
    norms: OnceLock<Vec<f64>>,
}

impl std::fmt::Debug for Corpus {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Corpus")
            .field("n_docs", &self.n_docs())
            .field("vocabulary", &self.doc_freq.len())
            .field("meta", &self.meta)
            .finish()
    }
}

impl PartialEq for Corpus {
    fn eq(&self, other: &Self) -> bool {
        self.documents == other.documents
            && self.identifiers == other.identifiers
            && self.meta == other.meta
    }
}

impl Corpus {
    pub fn new(
        documents: Vec<Document>,
        identifiers: BTreeMap<String, String>,
        meta: CorpusMeta,
    ) -> Self {
        let mut doc_freq: BTreeMap<String, u32> = BTreeMap::new();
        let mut postings: BTreeMap<String, Vec<(u32, u32)>> = BTreeMap::new();
        for (idx, doc) in documents.iter().enumerate() {
            for (term, &count) in &doc.term_counts {
                *doc_freq.entry(term.clone()).or_default() += 1;
                postings
                    .entry(term.clone())
                    .or_default()
                    .push((idx as u32, count));
            }
        }
        Corpus {
            documents,
            doc_freq,
            identifiers,
            postings,
            meta,
            norms: OnceLock::new(),
        }
    }

    pub fn documents(&self) -> &[Document] {
        &self.documents
    }

    pub fn document(&self, idx: usize) -> &Document {
        &self.documents[idx]
    }

    pub fn n_docs(&self) -> usize {
        self.documents.len()
    }

    pub fn is_empty(&self) -> bool {
        self.documents.is_empty()
    }

    pub fn meta(&self) -> &CorpusMeta {
        &self.meta
    }

    pub fn doc_freq(&self, word: &str) -> u32 {
        self.doc_freq.get(word).copied().unwrap_or(0)
    }

    pub fn vocabulary(&self) -> impl Iterator<Item = (&str, u32)> {
        self.doc_freq.iter().map(|(w, &df)| (w.as_str(), df))
    }

    /// `(document index, raw count)` pairs for a term, ascending by index.
    pub fn postings(&self, word: &str) -> &[(u32, u32)] {
        self.postings.get(word).map_or(&[], Vec::as_slice)
    }

    pub fn identifier_surface(&self, word: &str) -> Option<&str> {
        self.identifiers.get(word).map(String::as_str)
    }

    /// Fraction of documents containing `word`.
    pub fn document_frequency_ratio(&self, word: &str) -> Result<f64> {
        if self.documents.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        Ok(self.doc_freq(word) as f64 / self.n_docs() as f64)
    }

    pub(crate) fn cached_norms(&self, compute: impl FnOnce(&Corpus) -> Vec<f64>) -> &[f64] {
        self.norms.get_or_init(|| compute(self))
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let file = File::create(path).map_err(|e| Error::io(path, e))?;
        let mut out = BufWriter::new(file);
        out.write_all(self.to_text().as_bytes())
            .and_then(|_| out.flush())
            .map_err(|e| Error::io(path, e))
    }

    /// Line-oriented index format: `#key=value` headers, one `D` line per
    /// document, one `I` line per identifier surface, and `#docs`/`#postings`
    /// trailers used as a checksum.
    pub fn to_text(&self) -> String {
        let mut text = String::new();
        let _ = writeln!(text, "#stoplist_sha={}", self.meta.stoplist_sha);
        let _ = writeln!(text, "#keywords_sha={}", self.meta.keywords_sha);
        let _ = writeln!(text, "#source={}", self.meta.source.replace(['\n', '\r'], " "));
        let mut postings = 0usize;
        for doc in &self.documents {
            let _ = write!(text, "D\t{}\t", doc.doc_id);
            for (i, (term, count)) in doc.term_counts.iter().enumerate() {
                if i > 0 {
                    text.push(',');
                }
                let _ = write!(text, "{term}:{count}");
            }
            text.push('\n');
            postings += doc.term_counts.len();
        }
        for (word, surface) in &self.identifiers {
            let _ = writeln!(text, "I\t{word}\t{surface}");
        }
        let _ = writeln!(text, "#docs={}", self.documents.len());
        let _ = writeln!(text, "#postings={postings}");
        text
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Self::from_text(&text).map_err(|reason| Error::corrupt(path, reason))
    }

    pub fn from_text(text: &str) -> Result<Self, String> {
        let mut headers: BTreeMap<&str, &str> = BTreeMap::new();
        let mut documents = Vec::new();
        let mut identifiers = BTreeMap::new();
        let mut done = false;
        for (idx, line) in text.lines().enumerate() {
            let line_no = idx + 1;
            if done {
                return Err(format!("line {line_no}: content after #postings trailer"));
            }
            if let Some(header) = line.strip_prefix('#') {
                let (key, value) = header
                    .split_once('=')
                    .ok_or_else(|| format!("line {line_no}: malformed header"))?;
                headers.insert(key, value);
                done = key == "postings";
                continue;
            }
            let mut fields = line.splitn(3, '\t');
            match (fields.next(), fields.next(), fields.next()) {
                (Some("D"), Some(doc_id), Some(list)) => {
                    let mut term_counts = BTreeMap::new();
                    for item in list.split(',').filter(|s| !s.is_empty()) {
                        let (term, count) = item
                            .rsplit_once(':')
                            .ok_or_else(|| format!("line {line_no}: bad entry {item:?}"))?;
                        let count: u32 = count
                            .parse()
                            .ok()
                            .filter(|&c| c > 0)
                            .ok_or_else(|| format!("line {line_no}: bad count {count:?}"))?;
                        term_counts.insert(term.to_owned(), count);
                    }
                    documents.push(Document {
                        doc_id: doc_id.to_owned(),
                        term_counts,
                    });
                }
                (Some("I"), Some(word), Some(surface)) => {
                    identifiers.insert(word.to_owned(), surface.to_owned());
                }
                _ => return Err(format!("line {line_no}: unrecognized record")),
            }
        }
        if !done {
            return Err("missing #postings trailer (truncated file?)".into());
        }
        let number = |key: &str| -> Result<usize, String> {
            headers
                .get(key)
                .ok_or_else(|| format!("missing #{key}"))?
                .parse()
                .map_err(|_| format!("bad #{key}"))
        };
        if number("docs")? != documents.len() {
            return Err("document count mismatch".into());
        }
        let postings: usize = documents.iter().map(|d| d.term_counts.len()).sum();
        if number("postings")? != postings {
            return Err("postings count mismatch".into());
        }
        let header = |key: &str| -> Result<String, String> {
            headers
                .get(key)
                .map(|v| v.to_string())
                .ok_or_else(|| format!("missing #{key}"))
        };
        let meta = CorpusMeta {
            stoplist_sha: header("stoplist_sha")?,
            keywords_sha: header("keywords_sha")?,
            source: header("source")?,
        };
        Ok(Corpus::new(documents, identifiers, meta))
    }
}

/// Settings for turning text into documents.
#[derive(Debug, Clone)]
pub struct CorpusOptions {
    pub stops: StopList,
    pub keywords: WordList,
    /// File extensions (without dot) picked up by the method splitter.
    pub extensions: Vec<String>,
    pub strip_comments: bool,
}

impl Default for CorpusOptions {
    fn default() -> Self {
        CorpusOptions {
            stops: StopList::default_stopwords(),
            keywords: java_keywords(),
            extensions: vec!["java".to_owned()],
            strip_comments: false,
        }
    }
}

/// Result of indexing a directory.
#[derive(Debug)]
pub struct CorpusBuild {
    pub corpus: Corpus,
    pub files: usize,
    pub warnings: Vec<String>,
}

struct DraftDoc {
    doc: Document,
    surfaces: Vec<(String, String)>,
}

fn draft(doc_id: String, text: &str, opts: &CorpusOptions) -> DraftDoc {
    let seq = preprocess(text, &opts.stops, SplitMode::SplitAndKeepWhole);
    let mut term_counts = BTreeMap::new();
    let mut surfaces = Vec::new();
    for token in seq.tokens {
        if opts.keywords.contains(&token.normalized) {
            continue;
        }
        if token.origin == Origin::CamelPart || token.is_compound() {
            surfaces.push((token.normalized.clone(), token.surface));
        }
        *term_counts.entry(token.normalized).or_insert(0u32) += 1;
    }
    DraftDoc {
        doc: Document {
            doc_id: doc_id.replace(['\t', '\n', '\r'], " "),
            term_counts,
        },
        surfaces,
    }
}

fn finish(drafts: Vec<DraftDoc>, opts: &CorpusOptions, source: String) -> Corpus {
    // Most frequent surface wins; ties go to the lexicographically smallest.
    let mut tallies: BTreeMap<String, BTreeMap<String, u32>> = BTreeMap::new();
    let mut documents = Vec::with_capacity(drafts.len());
    for draft in drafts {
        for (word, surface) in draft.surfaces {
            *tallies.entry(word).or_default().entry(surface).or_default() += 1;
        }
        documents.push(draft.doc);
    }
    let identifiers = tallies
        .into_iter()
        .filter_map(|(word, counts)| {
            let best = counts
                .into_iter()
                .max_by(|a, b| a.1.cmp(&b.1).then_with(|| b.0.cmp(&a.0)))?;
            Some((word, best.0))
        })
        .collect();
    let meta = CorpusMeta {
        stoplist_sha: opts.stops.sha256_hex(),
        keywords_sha: opts.keywords.sha256_hex(),
        source,
    };
    Corpus::new(documents, identifiers, meta)
}

/// Relative paths (with `/` separators) of every file under `root`, sorted.
fn list_files(root: &Path, filter: impl Fn(&Path) -> bool) -> Result<Vec<(String, PathBuf)>> {
    if !root.is_dir() {
        return Err(Error::io(
            root,
            std::io::Error::new(std::io::ErrorKind::NotFound, "not a directory"),
        ));
    }
    let mut files = Vec::new();
    for entry in WalkDir::new(root).follow_links(false) {
        let entry = entry.map_err(|e| {
            let path = e.path().unwrap_or(root).to_path_buf();
            Error::io(path, e.into())
        })?;
        if !entry.file_type().is_file() || !filter(entry.path()) {
            continue;
        }
        let rel = entry
            .path()
            .strip_prefix(root)
            .unwrap_or(entry.path())
            .components()
            .map(|c| c.as_os_str().to_string_lossy().into_owned())
            .collect::<Vec<_>>()
            .join("/");
        files.push((rel, entry.into_path()));
    }
    files.sort();
    Ok(files)
}

/// Indexes a source tree: every matching file is split into method units and
/// every unit becomes a document `path#ordinal:name` (ordinal 1-based; a
/// whole-file fallback gets ordinal 0). Unreadable files are skipped with a
/// warning.
pub fn build_corpus(root: impl AsRef<Path>, opts: &CorpusOptions) -> Result<CorpusBuild> {
    let root = root.as_ref();
    let files = list_files(root, |p| {
        p.extension()
            .and_then(|e| e.to_str())
            .is_some_and(|e| opts.extensions.iter().any(|x| x == e))
    })?;
    let per_file: Vec<(Vec<DraftDoc>, Option<String>)> = files
        .par_iter()
        .map(|(rel, path)| {
            let text = match fs::read(path) {
                Ok(bytes) => String::from_utf8_lossy(&bytes).into_owned(),
                Err(e) => return (Vec::new(), Some(format!("{rel}: skipped: {e}"))),
            };
            let split = split_methods_with(&text, opts.strip_comments);
            let warning = split.warning.as_ref().map(|w| format!("{rel}: whole file: {w}"));
            let drafts = if split.is_whole_file() {
                vec![draft(format!("{rel}#0:{WHOLE_FILE}"), &split.units[0].text, opts)]
            } else {
                split
                    .units
                    .iter()
                    .enumerate()
                    .map(|(i, unit)| draft(format!("{rel}#{}:{}", i + 1, unit.name), &unit.text, opts))
                    .collect()
            };
            (drafts, warning)
        })
        .collect();
    let mut warnings = Vec::new();
    let mut drafts = Vec::new();
    for (docs, warning) in per_file {
        drafts.extend(docs);
        warnings.extend(warning);
    }
    let corpus = finish(drafts, opts, root.display().to_string());
    Ok(CorpusBuild {
        corpus,
        files: files.len(),
        warnings,
    })
}

/// Indexes a directory that already holds one document per file, bypassing
/// the method splitter. The relative path is the document id.
pub fn build_presplit_corpus(root: impl AsRef<Path>, opts: &CorpusOptions) -> Result<CorpusBuild> {
    let root = root.as_ref();
    let files = list_files(root, |_| true)?;
    let per_file: Vec<(Option<DraftDoc>, Option<String>)> = files
        .par_iter()
        .map(|(rel, path)| match fs::read(path) {
            Ok(bytes) => (
                Some(draft(rel.clone(), &String::from_utf8_lossy(&bytes), opts)),
                None,
            ),
            Err(e) => (None, Some(format!("{rel}: skipped: {e}"))),
        })
        .collect();
    let mut warnings = Vec::new();
    let mut drafts = Vec::new();
    for (doc, warning) in per_file {
        drafts.extend(doc);
        warnings.extend(warning);
    }
    let corpus = finish(drafts, opts, root.display().to_string());
    Ok(CorpusBuild {
        corpus,
        files: files.len(),
        warnings,
    })
}

/// Builds a corpus from in-memory `(doc_id, text)` pairs.
pub fn corpus_from_texts<I, S, T>(docs: I, opts: &CorpusOptions) -> Corpus
where
    I: IntoIterator<Item = (S, T)>,
    S: Into<String>,
    T: AsRef<str>,
{
    let drafts = docs
        .into_iter()
        .map(|(id, text)| draft(id.into(), text.as_ref(), opts))
        .collect();
    finish(drafts, opts, String::from("<memory>"))
}
