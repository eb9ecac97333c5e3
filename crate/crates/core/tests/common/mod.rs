//! Shared fixtures and independent oracles for the integration tests.
//!
//! The oracles deliberately avoid the library's indexes and scoring paths:
//! they recompute everything from raw term counts with dense loops.

#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet};
use std::path::PathBuf;

use quickar::adjacency::{read_dump, DbMeta};
use quickar::textprep::{preprocess, SplitMode};
use quickar::{AdjacencyDatabase, Corpus, CorpusOptions, QueryRecord, StopList, TitleRecord};
use rand::seq::{IndexedRandom, SliceRandom};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub fn fixtures() -> PathBuf {
    PathBuf::from(env!("CARGO_MANIFEST_DIR")).join("tests/fixtures")
}

pub fn fixture_project() -> PathBuf {
    fixtures().join("project")
}

pub fn manifest() -> Vec<String> {
    std::fs::read_to_string(fixtures().join("MANIFEST"))
        .unwrap()
        .lines()
        .filter(|l| !l.starts_with('#') && !l.trim().is_empty())
        .map(str::to_owned)
        .collect()
}

pub fn fixture_corpus() -> Corpus {
    quickar::build_corpus(fixture_project(), &CorpusOptions::default())
        .unwrap()
        .corpus
}

pub fn fixture_titles() -> Vec<TitleRecord> {
    let file = std::fs::File::open(fixtures().join("titles.tsv")).unwrap();
    quickar::adjacency::filter_titles(read_dump(std::io::BufReader::new(file)), "java").collect()
}

pub fn fixture_db() -> AdjacencyDatabase {
    let stops = StopList::default_stopwords();
    let meta = DbMeta::new(2, &stops, "titles.tsv");
    AdjacencyDatabase::build(fixture_titles(), &stops, meta)
}

pub fn fixture_queries() -> Vec<QueryRecord> {
    quickar::eval::read_queries(fixtures().join("queries.tsv")).unwrap()
}

/// The three memory-leak question titles used as the adjacency ground truth.
pub const MEMORY_LEAK_TITLES: [&str; 3] = [
    "Creating a memory leak with Java",
    "What is the cause of memory leak?",
    "Tracking down a memory leak/garbage-collection issue in Java",
];

pub fn memory_leak_records() -> Vec<TitleRecord> {
    MEMORY_LEAK_TITLES
        .iter()
        .enumerate()
        .map(|(i, t)| TitleRecord {
            question_id: i as u64 + 1,
            title: (*t).to_owned(),
            tags: vec!["java".into(), "memory-leaks".into()],
        })
        .collect()
}

// ---------------------------------------------------------------------------
// Adjacency oracle

/// Brute-force windowed pair counts over every title: all index pairs
/// `i < j` with `j - i < window` and different words, counted both ways.
pub fn brute_force_pairs(
    titles: &[String],
    stops: &StopList,
    window: usize,
) -> BTreeMap<(String, String), u64> {
    let mut counts = BTreeMap::new();
    for title in titles {
        let seq = preprocess(title, stops, SplitMode::SplitOnly);
        let terms: Vec<&str> = seq.normalized().collect();
        for i in 0..terms.len() {
            for j in 0..terms.len() {
                if i < j && j - i < window && terms[i] != terms[j] {
                    *counts.entry((terms[i].to_owned(), terms[j].to_owned())).or_insert(0) += 1;
                    *counts.entry((terms[j].to_owned(), terms[i].to_owned())).or_insert(0) += 1;
                }
            }
        }
    }
    counts
}

/// Every stored `(word, neighbor) -> count` of a database.
pub fn db_pairs(db: &AdjacencyDatabase) -> BTreeMap<(String, String), u64> {
    let mut out = BTreeMap::new();
    for word in db.words() {
        for (n, &c) in db.neighbors(word).weights.iter() {
            out.insert((word.to_owned(), n.clone()), c);
        }
    }
    out
}

// ---------------------------------------------------------------------------
// Retrieval oracle

fn dense_weight(count: f64, df: f64, n: f64) -> f64 {
    if count == 0.0 {
        0.0
    } else {
        (1.0 + count.ln()) * (((n + 1.0) / (df + 1.0)).ln() + 1.0)
    }
}

/// Dense term-document matrix built straight from document term counts.
pub struct DenseIndex {
    pub vocab: Vec<String>,
    pub doc_ids: Vec<String>,
    pub counts: Vec<Vec<f64>>,
    pub df: Vec<f64>,
}

impl DenseIndex {
    pub fn new(corpus: &Corpus) -> Self {
        let vocab: Vec<String> = corpus
            .documents()
            .iter()
            .flat_map(|d| d.term_counts.keys().cloned())
            .collect::<BTreeSet<_>>()
            .into_iter()
            .collect();
        let counts: Vec<Vec<f64>> = corpus
            .documents()
            .iter()
            .map(|d| {
                vocab
                    .iter()
                    .map(|t| d.term_counts.get(t).copied().unwrap_or(0) as f64)
                    .collect()
            })
            .collect();
        let df = (0..vocab.len())
            .map(|j| counts.iter().filter(|row| row[j] > 0.0).count() as f64)
            .collect();
        DenseIndex {
            vocab,
            doc_ids: corpus.documents().iter().map(|d| d.doc_id.clone()).collect(),
            counts,
            df,
        }
    }

    fn n(&self) -> f64 {
        self.doc_ids.len() as f64
    }

    pub fn doc_vector(&self, d: usize) -> Vec<f64> {
        (0..self.vocab.len())
            .map(|j| dense_weight(self.counts[d][j], self.df[j], self.n()))
            .collect()
    }

    /// Cosine ranking; zero-score documents omitted, ties by doc id.
    pub fn rank(&self, query: &[&str]) -> Vec<(String, f64)> {
        let mut q_counts: BTreeMap<&str, f64> = BTreeMap::new();
        for t in query {
            *q_counts.entry(t).or_insert(0.0) += 1.0;
        }
        // Out-of-vocabulary terms still weigh on the query norm.
        let mut q_norm_sq = 0.0;
        let mut q_vec = vec![0.0; self.vocab.len()];
        for (t, c) in &q_counts {
            match self.vocab.binary_search_by(|v| v.as_str().cmp(t)) {
                Ok(j) => {
                    q_vec[j] = dense_weight(*c, self.df[j], self.n());
                    q_norm_sq += q_vec[j] * q_vec[j];
                }
                Err(_) => {
                    let w = dense_weight(*c, 0.0, self.n());
                    q_norm_sq += w * w;
                }
            }
        }
        let q_norm = q_norm_sq.sqrt();
        let mut scored: Vec<(String, f64)> = (0..self.doc_ids.len())
            .filter_map(|d| {
                let dv = self.doc_vector(d);
                let dot: f64 = dv.iter().zip(&q_vec).map(|(a, b)| a * b).sum();
                if dot <= 0.0 {
                    return None;
                }
                let d_norm = dv.iter().map(|x| x * x).sum::<f64>().sqrt();
                Some((self.doc_ids[d].clone(), dot / (d_norm * q_norm)))
            })
            .collect();
        scored.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        scored
    }

    /// Pseudo-relevance feedback sum over the oracle's own top documents.
    pub fn rocchio(&self, query: &[&str], stops: &StopList, top_docs: usize) -> Vec<(String, f64)> {
        let top: Vec<usize> = self
            .rank(query)
            .into_iter()
            .take(top_docs)
            .map(|(id, _)| self.doc_ids.iter().position(|d| *d == id).unwrap())
            .collect();
        let mut out: Vec<(String, f64)> = (0..self.vocab.len())
            .filter(|&j| !query.contains(&self.vocab[j].as_str()) && !stops.contains(&self.vocab[j]))
            .map(|j| {
                let s: f64 = top
                    .iter()
                    .map(|&d| dense_weight(self.counts[d][j], self.df[j], self.n()))
                    .sum();
                (self.vocab[j].clone(), s)
            })
            .filter(|(_, s)| *s > 0.0)
            .collect();
        out.sort_by(|a, b| b.1.total_cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        out
    }
}

// ---------------------------------------------------------------------------
// Rank statistics oracle

/// Exact two-sided Mann-Whitney p-value for samples without ties, by
/// enumerating every assignment of the pooled ranks to the first sample.
pub fn exact_mwu_p(a: &[f64], b: &[f64]) -> f64 {
    let mut pooled: Vec<f64> = a.iter().chain(b).copied().collect();
    pooled.sort_by(f64::total_cmp);
    let rank_of = |x: f64| pooled.iter().position(|&p| p == x).unwrap() as f64 + 1.0;
    let n1 = a.len();
    let n = pooled.len();
    let observed: f64 = a.iter().map(|&x| rank_of(x)).sum::<f64>() - (n1 * (n1 + 1)) as f64 / 2.0;
    let (mut le, mut ge, mut total) = (0u64, 0u64, 0u64);
    for mask in 0u64..(1 << n) {
        if mask.count_ones() as usize != n1 {
            continue;
        }
        let u = (0..n).filter(|i| mask >> i & 1 == 1).map(|i| i as f64 + 1.0).sum::<f64>()
            - (n1 * (n1 + 1)) as f64 / 2.0;
        total += 1;
        le += (u <= observed) as u64;
        ge += (u >= observed) as u64;
    }
    (2.0 * le.min(ge) as f64 / total as f64).min(1.0)
}

/// Every way to choose `k` of `0..n`, in lexicographic order.
pub fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Quantile by sorting and interpolating between the two closest ranks.
pub fn interpolated_quantile(values: &[f64], p: f64) -> f64 {
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let pos = p * (v.len() as f64 - 1.0);
    let below = pos.floor() as usize;
    let frac = pos - below as f64;
    if below + 1 < v.len() {
        v[below] * (1.0 - frac) + v[below + 1] * frac
    } else {
        v[below]
    }
}

// ---------------------------------------------------------------------------
// Camel-case oracle

#[derive(Clone, Copy, PartialEq)]
enum Class {
    Upper,
    Lower,
    Digit,
    Other,
}

fn class(c: char) -> Class {
    if c.is_uppercase() {
        Class::Upper
    } else if c.is_lowercase() {
        Class::Lower
    } else if c.is_numeric() {
        Class::Digit
    } else {
        Class::Other
    }
}

/// Boundary rules restated over character classes: split before an upper
/// case letter preceded by lower case or a digit, and before the last capital
/// of a capital run when lower case follows.
pub fn camel_oracle(token: &str) -> Vec<String> {
    let cs: Vec<char> = token.chars().collect();
    let mut out = Vec::new();
    let mut cur = String::new();
    for i in 0..cs.len() {
        let boundary = i > 0
            && match (class(cs[i - 1]), class(cs[i])) {
                (Class::Lower | Class::Digit, Class::Upper) => true,
                (Class::Upper, Class::Upper) => {
                    cs.get(i + 1).map(|&c| class(c)) == Some(Class::Lower)
                }
                _ => false,
            };
        if boundary {
            out.push(std::mem::take(&mut cur));
        }
        cur.push(cs[i]);
    }
    if !cur.is_empty() {
        out.push(cur);
    }
    out
}

// ---------------------------------------------------------------------------
// Planted vocabulary-mismatch scenario

pub struct PlantedScenario {
    /// `(doc_id, text)` pairs.
    pub docs: Vec<(String, String)>,
    pub titles: Vec<TitleRecord>,
    pub queries: Vec<QueryRecord>,
}

fn pseudo_word(rng: &mut ChaCha8Rng, used: &mut BTreeSet<String>) -> String {
    const ONSETS: [&str; 14] = ["b", "d", "f", "g", "k", "l", "m", "n", "p", "r", "s", "t", "v", "z"];
    const VOWELS: [&str; 5] = ["a", "e", "i", "o", "u"];
    loop {
        let syllables = rng.random_range(2..=3);
        let mut w = String::new();
        for _ in 0..syllables {
            w.push_str(ONSETS.choose(rng).unwrap());
            w.push_str(VOWELS.choose(rng).unwrap());
        }
        w.push_str(["x", "n", "r", "l"].choose(rng).unwrap());
        if used.insert(w.clone()) {
            return w;
        }
    }
}

/// Ten queries written in a "user" vocabulary, each with one gold document
/// written in a disjoint "code" vocabulary. Forty distractor documents use
/// the user words, so verbatim titles retrieve only distractors. The title
/// dump places each query's user words next to its gold document's code
/// words, among noise titles.
pub fn planted_scenario(seed: u64) -> PlantedScenario {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut used = BTreeSet::new();
    let mut words = |rng: &mut ChaCha8Rng, n: usize| -> Vec<String> {
        (0..n).map(|_| pseudo_word(rng, &mut used)).collect()
    };
    let filler = words(&mut rng, 60);
    let user: Vec<Vec<String>> = (0..10).map(|_| words(&mut rng, 3)).collect();
    let code: Vec<Vec<String>> = (0..10).map(|_| words(&mut rng, 4)).collect();

    let mut docs = Vec::new();
    for (i, cw) in code.iter().enumerate() {
        let mut body: Vec<String> = cw.iter().flat_map(|w| [w.clone(), w.clone()]).collect();
        body.extend(filler.choose_multiple(&mut rng, 6).cloned());
        body.shuffle(&mut rng);
        docs.push((format!("gold{i:02}"), body.join(" ")));
    }
    for d in 0..40 {
        let q = &user[d % 10];
        let mut body: Vec<String> = q.choose_multiple(&mut rng, 2).cloned().collect();
        body.extend(filler.choose_multiple(&mut rng, 8).cloned());
        body.shuffle(&mut rng);
        docs.push((format!("noise{d:02}"), body.join(" ")));
    }

    let mut titles = Vec::new();
    let mut qid = 1u64;
    for (uw, cw) in user.iter().zip(&code) {
        for _ in 0..8 {
            let u = uw.choose(&mut rng).unwrap();
            let c = cw.choose(&mut rng).unwrap();
            let f = filler.choose(&mut rng).unwrap();
            let title = match rng.random_range(0..3) {
                0 => format!("How to fix {u} {c} with {f}"),
                1 => format!("{f} {u} {c} problem in Java"),
                _ => format!("Why does {c} {u} fail"),
            };
            titles.push(TitleRecord {
                question_id: qid,
                title,
                tags: vec!["java".into()],
            });
            qid += 1;
        }
    }
    while titles.len() < 200 {
        let picked: Vec<&String> = filler.choose_multiple(&mut rng, 4).collect();
        titles.push(TitleRecord {
            question_id: qid,
            title: format!("{} {} and {} {}", picked[0], picked[1], picked[2], picked[3]),
            tags: vec!["java".into()],
        });
        qid += 1;
    }
    titles.shuffle(&mut rng);

    let queries = user
        .iter()
        .enumerate()
        .map(|(i, uw)| {
            let mut q = QueryRecord::new(format!("p{i:02}"), format!("The {} of {} {}", uw[0], uw[1], uw[2]));
            q.gold_docs.insert(format!("gold{i:02}"));
            q
        })
        .collect();
    PlantedScenario { docs, titles, queries }
}
