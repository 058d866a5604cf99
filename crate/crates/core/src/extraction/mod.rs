//! Animal mention extraction, canonicalization and substitution detection.

mod tokenize;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{AtuId, Corpus, TaleType};
use crate::lexicon::Lexicon;

pub use tokenize::{singularize, tokenize, Token, TokenKind};

#[derive(Debug, Error)]
pub enum ExtractionError {
    #[error("mention table is inconsistent: {0}")]
    Inconsistent(String),
    #[error("mention table JSON: {0}")]
    Json(#[from] serde_json::Error),
}

/// What a corpus-wide animal frequency counts.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CountMode {
    /// Every mention counts.
    #[default]
    Occurrences,
    /// Each tale counts once per animal.
    TalePresence,
}

/// How a tale contributes to a pair's co-occurrence weight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum PairMode {
    /// One per tale in which both animals appear.
    #[default]
    Set,
    /// Product of the two animals' mention counts in the tale.
    Multiset,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ExtractionOptions {
    /// Frequency used for the rollup threshold.
    pub count_mode: CountMode,
    pub pair_mode: PairMode,
    pub detect_substitutions: bool,
}

impl Default for ExtractionOptions {
    fn default() -> Self {
        Self {
            count_mode: CountMode::Occurrences,
            pair_mode: PairMode::Set,
            detect_substitutions: true,
        }
    }
}

/// Unordered pair of distinct canonical animal names, stored sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct AnimalPair {
    first: String,
    second: String,
}

impl AnimalPair {
    /// Returns `None` for a self-pair.
    pub fn new(a: impl Into<String>, b: impl Into<String>) -> Option<Self> {
        let (a, b) = (a.into(), b.into());
        match a.cmp(&b) {
            std::cmp::Ordering::Less => Some(Self {
                first: a,
                second: b,
            }),
            std::cmp::Ordering::Greater => Some(Self {
                first: b,
                second: a,
            }),
            std::cmp::Ordering::Equal => None,
        }
    }

    pub fn first(&self) -> &str {
        &self.first
    }

    pub fn second(&self) -> &str {
        &self.second
    }

    pub fn contains(&self, name: &str) -> bool {
        self.first == name || self.second == name
    }
}

impl fmt::Display for AnimalPair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.first, self.second)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Mention {
    pub tale_id: AtuId,
    pub lemma: String,
    pub canonical: String,
    pub token_index: usize,
    pub in_parenthetical: bool,
}

/// Per-tale animal mentions after canonicalization.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MentionTable {
    /// Sorted by tale id, then token index.
    pub mentions: Vec<Mention>,
    /// One entry per analyzable tale, possibly empty.
    pub per_tale_sets: BTreeMap<AtuId, BTreeSet<String>>,
    pub substitution_pairs: BTreeMap<AtuId, BTreeMap<AnimalPair, u64>>,
    /// Corpus-wide mention counts per canonical name.
    pub counts: BTreeMap<String, u64>,
    /// Alias-level name to final canonical name, for every name seen.
    pub rollup: BTreeMap<String, String>,
    pub count_mode: CountMode,
    pub pair_mode: PairMode,
}

impl MentionTable {
    /// Number of tales each canonical animal appears in.
    pub fn tale_presence_counts(&self) -> BTreeMap<String, u64> {
        let mut counts = BTreeMap::new();
        for set in self.per_tale_sets.values() {
            for name in set {
                *counts.entry(name.clone()).or_insert(0) += 1;
            }
        }
        counts
    }

    /// Corpus-wide frequencies under `mode`.
    pub fn frequencies(&self, mode: CountMode) -> BTreeMap<String, u64> {
        match mode {
            CountMode::Occurrences => self.counts.clone(),
            CountMode::TalePresence => self.tale_presence_counts(),
        }
    }

    /// Mention counts per canonical name within one tale.
    pub fn tale_mention_counts(&self, tale: AtuId) -> BTreeMap<&str, u64> {
        let mut counts = BTreeMap::new();
        for m in self.mentions.iter().filter(|m| m.tale_id == tale) {
            *counts.entry(m.canonical.as_str()).or_insert(0) += 1;
        }
        counts
    }

    pub fn total_substitutions(&self) -> BTreeMap<AnimalPair, u64> {
        let mut totals = BTreeMap::new();
        for pairs in self.substitution_pairs.values() {
            for (pair, n) in pairs {
                *totals.entry(pair.clone()).or_insert(0) += n;
            }
        }
        totals
    }

    /// Checks the derived fields against the mention list.
    pub fn validate(&self) -> Result<(), ExtractionError> {
        let bad = |msg: String| Err(ExtractionError::Inconsistent(msg));
        let mut sets: BTreeMap<AtuId, BTreeSet<String>> = self
            .per_tale_sets
            .keys()
            .map(|id| (*id, BTreeSet::new()))
            .collect();
        let mut counts: BTreeMap<String, u64> = BTreeMap::new();
        for m in &self.mentions {
            let Some(set) = sets.get_mut(&m.tale_id) else {
                return bad(format!("mention in unknown tale ATU {}", m.tale_id));
            };
            set.insert(m.canonical.clone());
            *counts.entry(m.canonical.clone()).or_insert(0) += 1;
        }
        if sets != self.per_tale_sets {
            return bad("per-tale animal sets do not match the mentions".into());
        }
        if counts != self.counts {
            return bad("counts do not match the mentions".into());
        }
        for (tale, pairs) in &self.substitution_pairs {
            let Some(set) = self.per_tale_sets.get(tale) else {
                return bad(format!("substitutions for unknown tale ATU {tale}"));
            };
            let per_tale = self.tale_mention_counts(*tale);
            for (pair, &n) in pairs {
                if !set.contains(pair.first()) || !set.contains(pair.second()) {
                    return bad(format!(
                        "substitution {pair} in ATU {tale} names an absent animal"
                    ));
                }
                let combinations = match self.pair_mode {
                    PairMode::Set => 1,
                    PairMode::Multiset => per_tale[pair.first()] * per_tale[pair.second()],
                };
                if n > combinations {
                    return bad(format!(
                        "substitution {pair} occurs {n} times in ATU {tale}, exceeding {combinations} combinations"
                    ));
                }
            }
        }
        Ok(())
    }

    pub fn to_json(&self) -> Result<String, ExtractionError> {
        let value = serde_json::to_value(MentionDocument::from(self))?;
        let mut text = serde_json::to_string_pretty(&value)?;
        text.push('\n');
        Ok(text)
    }

    pub fn from_json(json: &str) -> Result<Self, ExtractionError> {
        let doc: MentionDocument = serde_json::from_str(json)?;
        let table = doc.into_table()?;
        table.validate()?;
        Ok(table)
    }
}

#[derive(Serialize, Deserialize)]
struct MentionDocument {
    count_mode: CountMode,
    pair_mode: PairMode,
    counts: BTreeMap<String, u64>,
    rollup: BTreeMap<String, String>,
    tales: BTreeMap<AtuId, TaleMentions>,
}

#[derive(Serialize, Deserialize)]
struct TaleMentions {
    animals: BTreeSet<String>,
    mentions: Vec<MentionRecord>,
    substitutions: Vec<(String, String, u64)>,
}

#[derive(Serialize, Deserialize)]
struct MentionRecord {
    lemma: String,
    canonical: String,
    token_index: usize,
    in_parenthetical: bool,
}

impl From<&MentionTable> for MentionDocument {
    fn from(table: &MentionTable) -> Self {
        let mut tales: BTreeMap<AtuId, TaleMentions> = table
            .per_tale_sets
            .iter()
            .map(|(id, set)| {
                let substitutions = table
                    .substitution_pairs
                    .get(id)
                    .map(|pairs| {
                        pairs
                            .iter()
                            .map(|(p, n)| (p.first().to_string(), p.second().to_string(), *n))
                            .collect()
                    })
                    .unwrap_or_default();
                (
                    *id,
                    TaleMentions {
                        animals: set.clone(),
                        mentions: Vec::new(),
                        substitutions,
                    },
                )
            })
            .collect();
        for m in &table.mentions {
            if let Some(entry) = tales.get_mut(&m.tale_id) {
                entry.mentions.push(MentionRecord {
                    lemma: m.lemma.clone(),
                    canonical: m.canonical.clone(),
                    token_index: m.token_index,
                    in_parenthetical: m.in_parenthetical,
                });
            }
        }
        Self {
            count_mode: table.count_mode,
            pair_mode: table.pair_mode,
            counts: table.counts.clone(),
            rollup: table.rollup.clone(),
            tales,
        }
    }
}

impl MentionDocument {
    fn into_table(self) -> Result<MentionTable, ExtractionError> {
        let mut mentions = Vec::new();
        let mut per_tale_sets = BTreeMap::new();
        let mut substitution_pairs = BTreeMap::new();
        for (id, tale) in self.tales {
            mentions.extend(tale.mentions.into_iter().map(|r| Mention {
                tale_id: id,
                lemma: r.lemma,
                canonical: r.canonical,
                token_index: r.token_index,
                in_parenthetical: r.in_parenthetical,
            }));
            let mut pairs = BTreeMap::new();
            for (a, b, n) in tale.substitutions {
                let pair = AnimalPair::new(a.clone(), b).ok_or_else(|| {
                    ExtractionError::Inconsistent(format!("self-pair {a:?} in ATU {id}"))
                })?;
                *pairs.entry(pair).or_insert(0) += n;
            }
            if !pairs.is_empty() {
                substitution_pairs.insert(id, pairs);
            }
            per_tale_sets.insert(id, tale.animals);
        }
        mentions.sort_by_key(|m| (m.tale_id, m.token_index));
        Ok(MentionTable {
            mentions,
            per_tale_sets,
            substitution_pairs,
            counts: self.counts,
            rollup: self.rollup,
            count_mode: self.count_mode,
            pair_mode: self.pair_mode,
        })
    }
}

fn is_separator(token: &Token) -> bool {
    token.kind == TokenKind::Separator
        || (token.kind == TokenKind::Word && matches!(token.text.as_str(), "or" | "and"))
}

/// Finds parenthetical alternatives such as `fox (jackal)` or `fox (coyote, jackal)`.
///
/// Pairs use alias-level canonical names; self-pairs are dropped.
pub fn detect_substitutions(tokens: &[Token], lex: &Lexicon) -> Vec<AnimalPair> {
    detect_substitutions_with(tokens, |w| {
        lex.is_animal(w).then(|| lex.alias_of(w).to_string())
    })
}

/// Substitution detection with a caller-supplied canonicalizer that returns
/// `None` for non-animal words.
pub fn detect_substitutions_with(
    tokens: &[Token],
    canonical: impl Fn(&str) -> Option<String>,
) -> Vec<AnimalPair> {
    let mut pairs = Vec::new();
    for (i, token) in tokens.iter().enumerate() {
        if !(token.is_word() && token.depth == 0) {
            continue;
        }
        let Some(outer) = canonical(&token.text) else {
            continue;
        };
        if tokens.get(i + 1).map(|t| t.kind) != Some(TokenKind::Open) {
            continue;
        }
        let mut inner = Vec::new();
        let mut pure = true;
        let mut closed = false;
        for t in &tokens[i + 2..] {
            if t.kind == TokenKind::Close && t.depth == 0 {
                closed = true;
                break;
            }
            if t.depth != 1 || t.kind == TokenKind::Open {
                pure = false;
                break;
            }
            if is_separator(t) {
                continue;
            }
            match (t.kind, canonical(&t.text)) {
                (TokenKind::Word, Some(name)) => inner.push(name),
                _ => {
                    pure = false;
                    break;
                }
            }
        }
        if pure && closed {
            pairs.extend(
                inner
                    .into_iter()
                    .filter_map(|name| AnimalPair::new(outer.clone(), name)),
            );
        }
    }
    pairs
}

/// Tokens of the title followed by the description, depth reset between them.
fn tale_tokens(tale: &TaleType) -> Vec<Token> {
    let mut tokens = tokenize(&tale.title);
    tokens.extend(tokenize(&tale.description));
    tokens
}

struct RawMention {
    token_index: usize,
    lemma: String,
    alias: String,
    depth: u32,
}

/// Extracts animal mentions from every analyzable tale.
///
/// Aliases apply first; the rollup map is then computed once from
/// corpus-wide alias-level frequencies and applied to every mention.
pub fn extract_mentions(
    corpus: &Corpus,
    lex: &Lexicon,
    options: &ExtractionOptions,
) -> MentionTable {
    let tales: Vec<(&TaleType, Vec<Token>)> =
        corpus.analyzable().map(|t| (t, tale_tokens(t))).collect();

    let raw: Vec<Vec<RawMention>> = tales
        .iter()
        .map(|(_, tokens)| {
            tokens
                .iter()
                .enumerate()
                .filter(|(_, t)| t.is_word() && lex.is_animal(&t.text))
                .map(|(i, t)| RawMention {
                    token_index: i,
                    lemma: t.text.clone(),
                    alias: lex.alias_of(&t.text).to_string(),
                    depth: t.depth,
                })
                .collect()
        })
        .collect();

    let mut alias_freq: BTreeMap<String, u64> = BTreeMap::new();
    for tale_mentions in &raw {
        match options.count_mode {
            CountMode::Occurrences => {
                for m in tale_mentions {
                    *alias_freq.entry(m.alias.clone()).or_insert(0) += 1;
                }
            }
            CountMode::TalePresence => {
                let distinct: BTreeSet<&str> =
                    tale_mentions.iter().map(|m| m.alias.as_str()).collect();
                for name in distinct {
                    *alias_freq.entry(name.to_string()).or_insert(0) += 1;
                }
            }
        }
    }
    let rollup = lex.apply_rollup(&alias_freq);
    let final_name = |alias: &str| {
        rollup
            .get(alias)
            .cloned()
            .unwrap_or_else(|| alias.to_string())
    };

    let mut table = MentionTable {
        mentions: Vec::new(),
        per_tale_sets: BTreeMap::new(),
        substitution_pairs: BTreeMap::new(),
        counts: BTreeMap::new(),
        rollup: rollup.clone(),
        count_mode: options.count_mode,
        pair_mode: options.pair_mode,
    };

    for ((tale, tokens), tale_mentions) in tales.iter().zip(raw) {
        let mut set = BTreeSet::new();
        for m in tale_mentions {
            let canonical = final_name(&m.alias);
            set.insert(canonical.clone());
            *table.counts.entry(canonical.clone()).or_insert(0) += 1;
            table.mentions.push(Mention {
                tale_id: tale.id,
                lemma: m.lemma,
                canonical,
                token_index: m.token_index,
                in_parenthetical: m.depth > 0,
            });
        }
        table.per_tale_sets.insert(tale.id, set);

        if options.detect_substitutions {
            let pairs = detect_substitutions_with(tokens, |w| {
                lex.is_animal(w).then(|| final_name(lex.alias_of(w)))
            });
            let mut multiset: BTreeMap<AnimalPair, u64> = BTreeMap::new();
            for pair in pairs {
                let n = multiset.entry(pair).or_insert(0);
                *n = match options.pair_mode {
                    PairMode::Set => 1,
                    PairMode::Multiset => *n + 1,
                };
            }
            if !multiset.is_empty() {
                table.substitution_pairs.insert(tale.id, multiset);
            }
        }
    }
    table.mentions.sort_by_key(|m| (m.tale_id, m.token_index));
    table
}
