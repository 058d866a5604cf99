#![allow(dead_code)]

pub mod criteria;
pub mod gen;
pub mod oracle;

use std::path::{Path, PathBuf};

pub fn fixtures_dir() -> PathBuf {
    Path::new(env!("CARGO_MANIFEST_DIR")).join("fixtures")
}

pub fn fixture(name: &str) -> String {
    std::fs::read_to_string(fixtures_dir().join(name)).unwrap_or_else(|e| panic!("{name}: {e}"))
}

use folkzoo::cooccurrence::{build_graph, CooccurrenceGraph};
use folkzoo::extraction::{extract_mentions, ExtractionOptions, PairMode};
use folkzoo::lexicon::{load_lexicon_tsv, Lexicon};
use folkzoo::parse_corpus;

/// Lexicon over `gen::ANIMALS` with no aliases and no rollup.
pub fn small_lexicon() -> Lexicon {
    Lexicon::new(
        load_lexicon_tsv(&gen::small_lexicon_tsv()).unwrap(),
        "animal",
    )
    .unwrap()
    .with_aliases(Default::default())
    .unwrap()
    .with_min_count(0)
}

pub fn graph_from_text(text: &str, lex: &Lexicon, pair_mode: PairMode) -> CooccurrenceGraph {
    let corpus = parse_corpus(text).unwrap().corpus;
    let options = ExtractionOptions {
        pair_mode,
        ..ExtractionOptions::default()
    };
    build_graph(&extract_mentions(&corpus, lex, &options)).unwrap()
}

/// Edge weights keyed like the naive oracle's output.
pub fn edge_map(g: &CooccurrenceGraph) -> std::collections::BTreeMap<(String, String), i64> {
    g.edges
        .iter()
        .map(|(p, &w)| ((p.first().to_owned(), p.second().to_owned()), w as i64))
        .collect()
}
