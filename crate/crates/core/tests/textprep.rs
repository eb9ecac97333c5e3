mod common;

use proptest::prelude::*;
use quickar::textprep::{preprocess, split_camel, tokenize, Origin, SplitMode};
use quickar::StopList;

const ACRONYMS: [(&str, &[&str]); 20] = [
    ("XMLHttpRequest", &["XML", "Http", "Request"]),
    ("GenericContainerInstantiator", &["Generic", "Container", "Instantiator"]),
    ("memory", &["memory"]),
    ("HTTPServer", &["HTTP", "Server"]),
    ("parseJSON", &["parse", "JSON"]),
    ("getURLForIO", &["get", "URL", "For", "IO"]),
    ("IOException", &["IO", "Exception"]),
    ("URL", &["URL"]),
    ("utf8Decoder", &["utf8", "Decoder"]),
    ("Base64Encoder", &["Base64", "Encoder"]),
    ("toString", &["to", "String"]),
    ("SSLContextFactory", &["SSL", "Context", "Factory"]),
    ("ABTest", &["AB", "Test"]),
    ("aB", &["a", "B"]),
    ("A", &["A"]),
    ("JSONObject", &["JSON", "Object"]),
    ("RestClientService", &["Rest", "Client", "Service"]),
    ("readUTF8String", &["read", "UTF8", "String"]),
    ("MyHTMLParser2", &["My", "HTML", "Parser2"]),
    ("already_lower", &["already_lower"]),
];

#[test]
fn acronym_table_matches_hand_labels_and_oracle() {
    for (token, expected) in ACRONYMS {
        assert_eq!(split_camel(token), expected, "{token}");
        assert_eq!(common::camel_oracle(token), expected, "oracle disagrees on {token}");
    }
}

#[test]
fn tokenize_examples() {
    assert_eq!(
        tokenize("memory leak/garbage-collection issue"),
        ["memory", "leak", "garbage", "collection", "issue"]
    );
    assert!(tokenize("").is_empty());
    assert_eq!(
        tokenize("Creating a memory leak with Java"),
        ["Creating", "a", "memory", "leak", "with", "Java"]
    );
    assert_eq!(tokenize("utf8 2024 v2"), ["utf8", "v2"]);
}

#[test]
fn memory_leak_title_keeps_down() {
    let seq = preprocess(
        "Tracking down a memory leak/garbage-collection issue in Java",
        &StopList::default_stopwords(),
        SplitMode::SplitOnly,
    );
    let got: Vec<&str> = seq.normalized().collect();
    assert_eq!(
        got,
        ["tracking", "down", "memory", "leak", "garbage", "collection", "issue", "java"]
    );
}

#[test]
fn keep_whole_adds_compound_after_parts() {
    let seq = preprocess("RestClientService", &StopList::empty(), SplitMode::SplitAndKeepWhole);
    let surfaces: Vec<&str> = seq.tokens.iter().map(|t| t.surface.as_str()).collect();
    assert_eq!(surfaces, ["Rest", "Client", "Service", "RestClientService"]);
    assert_eq!(seq.tokens[3].origin, Origin::Whole);
    assert!(seq.tokens[..3].iter().all(|t| t.origin == Origin::CamelPart));
}

#[test]
fn all_stop_words_vanish() {
    let seq = preprocess("the of and", &StopList::default_stopwords(), SplitMode::SplitOnly);
    assert!(seq.is_empty());
}

#[test]
fn stop_list_applies_to_camel_parts() {
    let stops = StopList::from_words(["get"]);
    let seq = preprocess("getValue", &stops, SplitMode::SplitAndKeepWhole);
    let got: Vec<&str> = seq.normalized().collect();
    assert_eq!(got, ["value", "getvalue"]);
}

#[test]
fn default_stop_list_is_normalized() {
    let stops = StopList::default_stopwords();
    assert!(!stops.contains("down"));
    assert!(stops.contains("the"));
    assert!(stops.words().all(|w| w == w.to_lowercase()));
}

fn identifier() -> impl Strategy<Value = String> {
    "[A-Za-z][A-Za-z0-9]{0,15}"
}

fn text() -> impl Strategy<Value = String> {
    prop::collection::vec(
        prop_oneof![identifier(), "[a-z]{1,6}", Just("the".to_owned()), Just("-".to_owned())],
        0..12,
    )
    .prop_map(|ws| ws.join(" "))
}

proptest! {
    #[test]
    fn camel_parts_concatenate_to_input(token in identifier()) {
        let parts = split_camel(&token);
        prop_assert_eq!(parts.concat(), token.clone());
        prop_assert!(parts.iter().all(|p| !p.is_empty()));
        prop_assert_eq!(parts, common::camel_oracle(&token));
    }

    #[test]
    fn split_only_is_idempotent(t in text()) {
        let stops = StopList::default_stopwords();
        let once: Vec<String> = preprocess(&t, &stops, SplitMode::SplitOnly)
            .normalized()
            .map(str::to_owned)
            .collect();
        let twice: Vec<String> = preprocess(&once.join(" "), &stops, SplitMode::SplitOnly)
            .normalized()
            .map(str::to_owned)
            .collect();
        prop_assert_eq!(once, twice);
    }

    #[test]
    fn output_is_stop_free_and_lowercase(t in text(), keep in any::<bool>()) {
        let stops = StopList::default_stopwords();
        let mode = if keep { SplitMode::SplitAndKeepWhole } else { SplitMode::SplitOnly };
        let seq = preprocess(&t, &stops, mode);
        for token in &seq.tokens {
            prop_assert!(!stops.contains(&token.normalized));
            prop_assert_eq!(&token.normalized, &token.surface.to_lowercase());
        }
        prop_assert_eq!(seq.clone(), preprocess(&t, &stops, mode));
    }

    #[test]
    fn camel_parts_come_from_a_whole_token(t in text()) {
        let seq = preprocess(&t, &StopList::empty(), SplitMode::SplitAndKeepWhole);
        let raw = tokenize(&t);
        for token in seq.tokens.iter().filter(|tk| tk.origin == Origin::CamelPart) {
            prop_assert!(raw.iter().any(|r| r.contains(token.surface.as_str())));
        }
    }
}
