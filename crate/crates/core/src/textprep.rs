//! Text preprocessing shared by every other stage: tokenization, camel-case
//! decomposition, lower-casing and stop-word removal.
//!
//! No stemming is applied anywhere. `"tracking"` and `"track"` stay distinct
//! terms, which keeps crowd vocabulary and code vocabulary comparable on their
//! surface forms.

use std::collections::BTreeSet;
use std::fs;
use std::path::{Path, PathBuf};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

const DEFAULT_STOPWORDS: &str = include_str!("../data/stopwords.txt");

/// Where a token came from relative to the raw identifier it was cut out of.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Origin {
    /// The raw token as it appeared in the text.
    Whole,
    /// One piece of a camel-case identifier.
    CamelPart,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Token {
    pub surface: String,
    pub normalized: String,
    pub origin: Origin,
}

impl Token {
    pub fn new(surface: &str, origin: Origin) -> Self {
        Token {
            surface: surface.to_owned(),
            normalized: surface.to_lowercase(),
            origin,
        }
    }

    /// True when the surface form is a multi-part camel-case identifier.
    pub fn is_compound(&self) -> bool {
        split_camel(&self.surface).len() > 1
    }
}

/// Ordered, preprocessed tokens of one title, query or document.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TermSequence {
    pub tokens: Vec<Token>,
    pub source_id: String,
}

impl TermSequence {
    pub fn new(source_id: impl Into<String>) -> Self {
        TermSequence {
            tokens: Vec::new(),
            source_id: source_id.into(),
        }
    }

    pub fn len(&self) -> usize {
        self.tokens.len()
    }

    pub fn is_empty(&self) -> bool {
        self.tokens.is_empty()
    }

    pub fn normalized(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(|t| t.normalized.as_str())
    }

    /// Tokens joined by single spaces, using surface forms.
    pub fn render(&self) -> String {
        let surfaces: Vec<&str> = self.tokens.iter().map(|t| t.surface.as_str()).collect();
        surfaces.join(" ")
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SplitMode {
    /// Emit only the camel-case parts of compound identifiers.
    SplitOnly,
    /// Emit the parts followed by the compound identifier itself.
    SplitAndKeepWhole,
}

/// An immutable set of lower-cased words loaded from a one-word-per-line
/// file. Used for stop words and for programming-language keywords.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WordList {
    words: BTreeSet<String>,
    source_path: String,
}

pub type StopList = WordList;

impl WordList {
    pub fn empty() -> Self {
        WordList {
            words: BTreeSet::new(),
            source_path: String::from("<empty>"),
        }
    }

    /// The bundled English stop list.
    pub fn default_stopwords() -> Self {
        Self::parse(DEFAULT_STOPWORDS, "<bundled:stopwords.txt>")
    }

    /// Parses list contents. Blank lines and `#` comments are ignored, entries
    /// are trimmed and lower-cased.
    pub fn parse(text: &str, source_path: impl Into<String>) -> Self {
        let words = text
            .lines()
            .map(|line| line.split('#').next().unwrap_or("").trim())
            .filter(|word| !word.is_empty())
            .map(str::to_lowercase)
            .collect();
        WordList {
            words,
            source_path: source_path.into(),
        }
    }

    pub fn load(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let text = fs::read_to_string(path).map_err(|e| Error::io(path, e))?;
        Ok(Self::parse(&text, path.display().to_string()))
    }

    pub fn from_words<I, S>(words: I) -> Self
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        WordList {
            words: words.into_iter().map(|w| w.as_ref().to_lowercase()).collect(),
            source_path: String::from("<inline>"),
        }
    }

    pub fn contains(&self, normalized: &str) -> bool {
        self.words.contains(normalized)
    }

    pub fn len(&self) -> usize {
        self.words.len()
    }

    pub fn is_empty(&self) -> bool {
        self.words.is_empty()
    }

    pub fn source_path(&self) -> &str {
        &self.source_path
    }

    pub fn words(&self) -> impl Iterator<Item = &str> {
        self.words.iter().map(String::as_str)
    }

    /// SHA-256 over the sorted entries, one per line. Two lists hash equal
    /// iff they contain the same words.
    pub fn sha256_hex(&self) -> String {
        let mut hasher = Sha256::new();
        for word in &self.words {
            hasher.update(word.as_bytes());
            hasher.update(b"\n");
        }
        hex::encode(hasher.finalize())
    }
}

/// Resolves an optional override path to a list, falling back to `default`.
pub fn load_or(path: Option<&PathBuf>, default: impl FnOnce() -> WordList) -> Result<WordList> {
    match path {
        Some(path) => WordList::load(path),
        None => Ok(default()),
    }
}

/// Splits raw text on every non-alphanumeric character. Empty and purely
/// numeric fragments are dropped.
pub fn tokenize(text: &str) -> Vec<&str> {
    text.split(|c: char| !c.is_alphanumeric())
        .filter(|frag| !frag.is_empty() && !frag.chars().all(char::is_numeric))
        .collect()
}

/// Splits an identifier at camel-case boundaries, preserving the original
/// casing of each part.
///
/// A boundary falls before an upper-case letter that follows a lower-case
/// letter or digit, and before the last letter of an upper-case run that is
/// followed by a lower-case letter (`XMLHttp` -> `XML`, `Http`).
pub fn split_camel(token: &str) -> Vec<&str> {
    let chars: Vec<(usize, char)> = token.char_indices().collect();
    let mut parts = Vec::new();
    let mut start = 0;
    for i in 1..chars.len() {
        let prev = chars[i - 1].1;
        let cur = chars[i].1;
        let next = chars.get(i + 1).map(|&(_, c)| c);
        let lower_to_upper = (prev.is_lowercase() || prev.is_numeric()) && cur.is_uppercase();
        let acronym_end =
            prev.is_uppercase() && cur.is_uppercase() && next.is_some_and(char::is_lowercase);
        if lower_to_upper || acronym_end {
            let at = chars[i].0;
            parts.push(&token[start..at]);
            start = at;
        }
    }
    if start < token.len() {
        parts.push(&token[start..]);
    }
    parts
}

/// Full preprocessing pipeline: tokenize, camel-split, normalize, drop stop
/// words. Camel parts take the position of their parent token; in
/// [`SplitMode::SplitAndKeepWhole`] the compound follows its parts.
pub fn preprocess(text: &str, stops: &StopList, mode: SplitMode) -> TermSequence {
    preprocess_with_id(text, stops, mode, "")
}

pub fn preprocess_with_id(
    text: &str,
    stops: &StopList,
    mode: SplitMode,
    source_id: &str,
) -> TermSequence {
    let mut seq = TermSequence::new(source_id);
    for raw in tokenize(text) {
        let parts = split_camel(raw);
        if parts.len() == 1 {
            seq.tokens.push(Token::new(raw, Origin::Whole));
        } else {
            seq.tokens
                .extend(parts.iter().map(|part| Token::new(part, Origin::CamelPart)));
            if mode == SplitMode::SplitAndKeepWhole {
                seq.tokens.push(Token::new(raw, Origin::Whole));
            }
        }
    }
    seq.tokens.retain(|t| !stops.contains(&t.normalized));
    seq
}
