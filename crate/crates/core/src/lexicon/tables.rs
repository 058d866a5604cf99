//! Curated text tables: aliases, exclusions and rollup targets.

use std::collections::{BTreeMap, BTreeSet};

use super::{normalize_lemma, LexiconError};

const DEFAULT_ALIASES: &str = include_str!("../../data/default_aliases.tsv");
const DEFAULT_EXCLUSIONS: &str = include_str!("../../data/default_exclusions.txt");
const DEFAULT_ROLLUP_TARGETS: &str = include_str!("../../data/default_rollup_targets.txt");

fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

/// Parses `variant<TAB>canonical` rows. `#` starts a comment line.
pub fn parse_alias_table(text: &str) -> Result<BTreeMap<String, String>, LexiconError> {
    let mut aliases = BTreeMap::new();
    for (line, row) in content_lines(text) {
        let mut fields = row.split('\t').map(str::trim);
        match (fields.next(), fields.next(), fields.next()) {
            (Some(variant), Some(canonical), None)
                if !variant.is_empty() && !canonical.is_empty() =>
            {
                let variant = normalize_lemma(variant);
                let canonical = normalize_lemma(canonical);
                if let Some(prev) = aliases.insert(variant.clone(), canonical.clone()) {
                    if prev != canonical {
                        return Err(LexiconError::Parse {
                            source_name: "alias table",
                            line,
                            message: format!(
                                "{variant:?} mapped to both {prev:?} and {canonical:?}"
                            ),
                        });
                    }
                }
            }
            _ => {
                return Err(LexiconError::Parse {
                    source_name: "alias table",
                    line,
                    message: format!("expected `variant<TAB>canonical`, got {row:?}"),
                })
            }
        }
    }
    Ok(aliases)
}

/// One lemma per line; `#` starts a comment line.
pub fn parse_word_list(text: &str) -> BTreeSet<String> {
    content_lines(text)
        .map(|(_, l)| normalize_lemma(l))
        .collect()
}

pub fn default_aliases() -> BTreeMap<String, String> {
    parse_alias_table(DEFAULT_ALIASES).expect("bundled alias table is valid")
}

pub fn default_exclusions() -> BTreeSet<String> {
    parse_word_list(DEFAULT_EXCLUSIONS)
}

pub fn default_rollup_targets() -> BTreeSet<String> {
    parse_word_list(DEFAULT_ROLLUP_TARGETS)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_cover_named_cases() {
        let aliases = default_aliases();
        for v in ["cock", "rooster", "hen"] {
            assert_eq!(aliases[v], "chicken");
        }
        assert!(default_exclusions().contains("fly"));
        assert!(default_rollup_targets().contains("bird"));
        for canonical in aliases.values() {
            assert!(!aliases.contains_key(canonical) || aliases[canonical] == *canonical);
            assert!(!default_exclusions().contains(canonical));
        }
    }

    #[test]
    fn malformed_alias_rows() {
        assert!(matches!(
            parse_alias_table("a\tb\nbroken\n"),
            Err(LexiconError::Parse { line: 2, .. })
        ));
        assert!(parse_alias_table("a\tb\na\tc\n").is_err());
        assert!(parse_alias_table("a\tb\na\tb\n").is_ok());
    }
}
