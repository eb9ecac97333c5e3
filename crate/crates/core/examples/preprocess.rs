//! Tokenization, camel-case splitting and stop-word removal.
//!
//! ```bash
//! cargo run --example preprocess -- "Tracking down a memory leak in XMLHttpRequest"
//! ```

use quickar::textprep::{preprocess, split_camel, tokenize};
use quickar::{SplitMode, StopList};

fn main() {
    let text = std::env::args()
        .nth(1)
        .unwrap_or_else(|| "Tracking down a memory leak in XMLHttpRequest".to_owned());
    let stops = StopList::default_stopwords();

    println!("raw tokens: {:?}", tokenize(&text));
    for token in tokenize(&text) {
        let parts = split_camel(token);
        if parts.len() > 1 {
            println!("  {token} -> {parts:?}");
        }
    }

    for mode in [SplitMode::SplitOnly, SplitMode::SplitAndKeepWhole] {
        let seq = preprocess(&text, &stops, mode);
        let terms: Vec<&str> = seq.normalized().collect();
        println!("{mode:?}: {terms:?}");
    }
}
