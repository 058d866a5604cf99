//! Reader for the WordNet 3.0 noun database files (`index.noun`, `data.noun`).
//!
//! `data.noun` lines: `offset lex_filenum ss_type w_cnt [word lex_id]... p_cnt
//! [symbol offset pos source/target]... | gloss`, with `w_cnt` in hex and
//! `p_cnt` in decimal. `index.noun` lines: `lemma pos synset_cnt p_cnt
//! [symbol]... sense_cnt tagsense_cnt [offset]...`. Lines starting with two
//! spaces are the license header.

use std::collections::BTreeMap;

use super::{normalize_lemma, LexiconError, Synset, SynsetGraph, SynsetId};

const HYPERNYM_SYMBOLS: [&str; 2] = ["@", "@i"];

fn parse_err(source_name: &'static str, line: usize, message: impl Into<String>) -> LexiconError {
    LexiconError::Parse {
        source_name,
        line,
        message: message.into(),
    }
}

fn is_header(line: &str) -> bool {
    line.starts_with("  ")
}

fn parse_offset(token: &str, source: &'static str, line: usize) -> Result<SynsetId, LexiconError> {
    if token.len() == 8 && token.bytes().all(|b| b.is_ascii_digit()) {
        Ok(SynsetId::new(token))
    } else {
        Err(parse_err(
            source,
            line,
            format!("bad synset offset {token:?}"),
        ))
    }
}

/// Loads the noun synsets and hypernym edges (`@` and `@i`).
///
/// The index file provides the lemma → synset mapping in sense order; every
/// offset it names must exist in the data file.
pub fn load_wordnet_nouns(index: &str, data: &str) -> Result<SynsetGraph, LexiconError> {
    let synsets = parse_data(data)?;
    let lemmas = parse_index(index)?;
    for (lemma, ids) in &lemmas {
        if let Some(missing) = ids.iter().find(|id| !synsets.contains_key(*id)) {
            return Err(LexiconError::DanglingIndexEntry {
                lemma: lemma.clone(),
                to: missing.clone(),
            });
        }
    }
    // Lemmas present in data but absent from the index still resolve.
    let mut lemmas = lemmas;
    for synset in synsets.values() {
        for word in &synset.words {
            let ids = lemmas.entry(word.clone()).or_default();
            if !ids.contains(&synset.id) {
                ids.push(synset.id.clone());
            }
        }
    }
    SynsetGraph::with_index(synsets, lemmas)
}

fn parse_data(data: &str) -> Result<BTreeMap<SynsetId, Synset>, LexiconError> {
    const SRC: &str = "data.noun";
    let mut synsets = BTreeMap::new();
    for (i, raw) in data.lines().enumerate() {
        let line = i + 1;
        if is_header(raw) || raw.trim().is_empty() {
            continue;
        }
        let body = raw.split_once(" | ").map_or(raw, |(b, _)| b);
        let body = body.strip_suffix(" |").unwrap_or(body);
        let mut tokens = body.split_ascii_whitespace();
        let mut next = |what: &str| {
            tokens
                .next()
                .ok_or_else(|| parse_err(SRC, line, format!("missing {what}")))
        };

        let id = parse_offset(next("synset offset")?, SRC, line)?;
        let lex_filenum = next("lexicographer file number")?;
        if !lex_filenum.bytes().all(|b| b.is_ascii_digit()) {
            return Err(parse_err(
                SRC,
                line,
                format!("bad lex_filenum {lex_filenum:?}"),
            ));
        }
        let ss_type = next("synset type")?;
        if ss_type != "n" {
            return Err(parse_err(
                SRC,
                line,
                format!("expected noun synset, got type {ss_type:?}"),
            ));
        }
        let w_cnt_tok = next("word count")?;
        let w_cnt = usize::from_str_radix(w_cnt_tok, 16)
            .map_err(|_| parse_err(SRC, line, format!("bad word count {w_cnt_tok:?}")))?;
        let mut words = Vec::with_capacity(w_cnt);
        for _ in 0..w_cnt {
            let word = next("word")?;
            let lex_id = next("lex_id")?;
            if u8::from_str_radix(lex_id, 16).is_err() {
                return Err(parse_err(SRC, line, format!("bad lex_id {lex_id:?}")));
            }
            let lemma = normalize_lemma(word);
            if !words.contains(&lemma) {
                words.push(lemma);
            }
        }
        let p_cnt_tok = next("pointer count")?;
        let p_cnt: usize = p_cnt_tok
            .parse()
            .map_err(|_| parse_err(SRC, line, format!("bad pointer count {p_cnt_tok:?}")))?;
        let mut hypernyms = Vec::new();
        for _ in 0..p_cnt {
            let symbol = next("pointer symbol")?;
            let target = parse_offset(next("pointer offset")?, SRC, line)?;
            let pos = next("pointer part of speech")?;
            let source_target = next("pointer source/target")?;
            if source_target.len() != 4 || u16::from_str_radix(source_target, 16).is_err() {
                return Err(parse_err(
                    SRC,
                    line,
                    format!("bad source/target {source_target:?}"),
                ));
            }
            if HYPERNYM_SYMBOLS.contains(&symbol) && pos == "n" && !hypernyms.contains(&target) {
                hypernyms.push(target);
            }
        }
        let synset = Synset {
            id: id.clone(),
            words,
            hypernyms,
        };
        if synsets.insert(id.clone(), synset).is_some() {
            return Err(parse_err(
                SRC,
                line,
                format!("duplicate synset offset {id}"),
            ));
        }
    }
    Ok(synsets)
}

fn parse_index(index: &str) -> Result<BTreeMap<String, Vec<SynsetId>>, LexiconError> {
    const SRC: &str = "index.noun";
    let mut lemmas = BTreeMap::new();
    for (i, raw) in index.lines().enumerate() {
        let line = i + 1;
        if is_header(raw) || raw.trim().is_empty() {
            continue;
        }
        let tokens: Vec<&str> = raw.split_ascii_whitespace().collect();
        let count = |pos: usize, what: &str| -> Result<usize, LexiconError> {
            tokens
                .get(pos)
                .and_then(|t| t.parse().ok())
                .ok_or_else(|| parse_err(SRC, line, format!("bad or missing {what}")))
        };
        if tokens.len() < 4 {
            return Err(parse_err(SRC, line, "truncated index entry"));
        }
        if tokens[1] != "n" {
            return Err(parse_err(
                SRC,
                line,
                format!("expected noun entry, got {:?}", tokens[1]),
            ));
        }
        let synset_cnt = count(2, "synset count")?;
        let p_cnt = count(3, "pointer count")?;
        let offsets_start = 4 + p_cnt + 2;
        // sense_cnt and tagsense_cnt must be numeric.
        count(4 + p_cnt, "sense count")?;
        count(5 + p_cnt, "tagged sense count")?;
        if tokens.len() != offsets_start + synset_cnt {
            return Err(parse_err(
                SRC,
                line,
                format!(
                    "expected {synset_cnt} synset offsets, found {}",
                    tokens.len().saturating_sub(offsets_start)
                ),
            ));
        }
        let ids = tokens[offsets_start..]
            .iter()
            .map(|t| parse_offset(t, SRC, line))
            .collect::<Result<Vec<_>, _>>()?;
        lemmas.insert(normalize_lemma(tokens[0]), ids);
    }
    Ok(lemmas)
}
