use std::collections::BTreeMap;

use super::{normalize_lemma, LexiconError, Synset, SynsetGraph, SynsetId};

/// Loads `lemma<TAB>synset_id<TAB>hypernym_id` rows.
///
/// Rows sharing a synset id accumulate lemmas and hypernyms. An empty or `-`
/// hypernym column marks a row without a hypernym edge.
pub fn load_lexicon_tsv(text: &str) -> Result<SynsetGraph, LexiconError> {
    let mut synsets: BTreeMap<SynsetId, Synset> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let row = raw.trim_end();
        if row.trim().is_empty() || row.trim_start().starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = row.split('\t').map(str::trim).collect();
        let (lemma, id, hypernym) = match fields.as_slice() {
            [lemma, id] => (*lemma, *id, ""),
            [lemma, id, hypernym] => (*lemma, *id, *hypernym),
            _ => {
                return Err(LexiconError::Parse {
                    source_name: "lexicon TSV",
                    line,
                    message: format!("expected 2 or 3 tab-separated fields, got {}", fields.len()),
                })
            }
        };
        if lemma.is_empty() || id.is_empty() {
            return Err(LexiconError::Parse {
                source_name: "lexicon TSV",
                line,
                message: "empty lemma or synset id".to_string(),
            });
        }
        let id = SynsetId::new(id);
        let synset = synsets.entry(id.clone()).or_insert_with(|| Synset {
            id,
            words: Vec::new(),
            hypernyms: Vec::new(),
        });
        let lemma = normalize_lemma(lemma);
        if !synset.words.contains(&lemma) {
            synset.words.push(lemma);
        }
        if !hypernym.is_empty() && hypernym != "-" {
            let h = SynsetId::new(hypernym);
            if !synset.hypernyms.contains(&h) {
                synset.hypernyms.push(h);
            }
        }
    }
    SynsetGraph::new(synsets.into_values())
}
