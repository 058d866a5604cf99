//! Lexical database, animal classification by hypernym closure, and
//! canonicalization of animal names (aliases plus low-frequency rollup).

mod tables;
mod tsv;
mod wordnet;

use std::collections::{BTreeMap, BTreeSet, VecDeque};
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use tables::{
    default_aliases, default_exclusions, default_rollup_targets, parse_alias_table, parse_word_list,
};
pub use tsv::load_lexicon_tsv;
pub use wordnet::load_wordnet_nouns;

/// Default rollup threshold: names seen fewer times are merged upward.
pub const DEFAULT_MIN_COUNT: u64 = 5;

#[derive(Debug, Error)]
pub enum LexiconError {
    #[error("{source_name} line {line}: {message}")]
    Parse {
        source_name: &'static str,
        line: usize,
        message: String,
    },
    #[error("synset {from} points to unknown synset {to}")]
    DanglingPointer { from: SynsetId, to: SynsetId },
    #[error("index entry {lemma:?} refers to unknown synset {to}")]
    DanglingIndexEntry { lemma: String, to: SynsetId },
    #[error("hypernym cycle: {}", display_path(.0))]
    Cycle(Vec<SynsetId>),
    #[error("animal root {0:?} not found in the lexical database")]
    UnknownRoot(String),
    #[error(
        "alias table is not idempotent: {variant:?} -> {canonical:?} but {canonical:?} -> {next:?}"
    )]
    AliasNotIdempotent {
        variant: String,
        canonical: String,
        next: String,
    },
    #[error("{0:?} is both excluded and an alias target")]
    ExcludedAliasTarget(String),
    #[error("{0:?} is not classified as an animal")]
    NotAnAnimal(String),
}

fn display_path(path: &[SynsetId]) -> String {
    path.iter()
        .map(ToString::to_string)
        .collect::<Vec<_>>()
        .join(" -> ")
}

/// Opaque synset identifier: a data-file offset or a symbolic name.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct SynsetId(pub String);

impl SynsetId {
    pub fn new(id: impl Into<String>) -> Self {
        Self(id.into())
    }

    pub fn as_str(&self) -> &str {
        &self.0
    }
}

impl fmt::Display for SynsetId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Synset {
    pub id: SynsetId,
    /// Lowercase lemmas; underscores already mapped to spaces.
    pub words: Vec<String>,
    pub hypernyms: Vec<SynsetId>,
}

/// Normalizes a database lemma: lowercase, underscores to spaces.
pub fn normalize_lemma(raw: &str) -> String {
    raw.replace('_', " ").to_lowercase()
}

/// Validated synset graph with a lemma index.
///
/// Every hypernym reference resolves and the hypernym relation is acyclic.
#[derive(Debug, Clone, Default)]
pub struct SynsetGraph {
    synsets: BTreeMap<SynsetId, Synset>,
    lemmas: BTreeMap<String, Vec<SynsetId>>,
}

impl SynsetGraph {
    /// Validates and indexes `synsets`, building the lemma index from synset words.
    pub fn new(synsets: impl IntoIterator<Item = Synset>) -> Result<Self, LexiconError> {
        let synsets: BTreeMap<SynsetId, Synset> =
            synsets.into_iter().map(|s| (s.id.clone(), s)).collect();
        let mut lemmas: BTreeMap<String, Vec<SynsetId>> = BTreeMap::new();
        for synset in synsets.values() {
            for word in &synset.words {
                let ids = lemmas.entry(word.clone()).or_default();
                if !ids.contains(&synset.id) {
                    ids.push(synset.id.clone());
                }
            }
        }
        Self::with_index(synsets, lemmas)
    }

    /// Uses an explicit lemma index (sense order preserved).
    pub fn with_index(
        synsets: BTreeMap<SynsetId, Synset>,
        lemmas: BTreeMap<String, Vec<SynsetId>>,
    ) -> Result<Self, LexiconError> {
        let graph = Self { synsets, lemmas };
        graph.check_references()?;
        graph.check_acyclic()?;
        Ok(graph)
    }

    fn check_references(&self) -> Result<(), LexiconError> {
        for synset in self.synsets.values() {
            for h in &synset.hypernyms {
                if !self.synsets.contains_key(h) {
                    return Err(LexiconError::DanglingPointer {
                        from: synset.id.clone(),
                        to: h.clone(),
                    });
                }
            }
        }
        for (lemma, ids) in &self.lemmas {
            if let Some(missing) = ids.iter().find(|id| !self.synsets.contains_key(id)) {
                return Err(LexiconError::DanglingIndexEntry {
                    lemma: lemma.clone(),
                    to: missing.clone(),
                });
            }
        }
        Ok(())
    }

    fn check_acyclic(&self) -> Result<(), LexiconError> {
        #[derive(Clone, Copy, PartialEq)]
        enum Mark {
            Active,
            Done,
        }
        let mut marks: BTreeMap<&SynsetId, Mark> = BTreeMap::new();
        for start in self.synsets.keys() {
            if marks.contains_key(start) {
                continue;
            }
            // Each frame: synset and the index of the next hypernym to visit.
            let mut stack: Vec<(&SynsetId, usize)> = vec![(start, 0)];
            marks.insert(start, Mark::Active);
            while let Some((id, next)) = stack.last_mut() {
                let hypernyms = &self.synsets[*id].hypernyms;
                if *next == hypernyms.len() {
                    marks.insert(*id, Mark::Done);
                    stack.pop();
                    continue;
                }
                let child = &hypernyms[*next];
                *next += 1;
                match marks.get(child) {
                    Some(Mark::Done) => {}
                    Some(Mark::Active) => {
                        let pos = stack.iter().position(|(s, _)| *s == child).unwrap_or(0);
                        let mut path: Vec<SynsetId> =
                            stack[pos..].iter().map(|(s, _)| (*s).clone()).collect();
                        path.push(child.clone());
                        return Err(LexiconError::Cycle(path));
                    }
                    None => {
                        marks.insert(child, Mark::Active);
                        stack.push((child, 0));
                    }
                }
            }
        }
        Ok(())
    }

    pub fn len(&self) -> usize {
        self.synsets.len()
    }

    pub fn is_empty(&self) -> bool {
        self.synsets.is_empty()
    }

    pub fn get(&self, id: &SynsetId) -> Option<&Synset> {
        self.synsets.get(id)
    }

    pub fn synsets(&self) -> impl Iterator<Item = &Synset> {
        self.synsets.values()
    }

    /// Synsets containing `lemma`, in index (sense) order.
    pub fn synsets_of(&self, lemma: &str) -> &[SynsetId] {
        self.lemmas.get(lemma).map_or(&[], Vec::as_slice)
    }

    pub fn hypernym_edge_count(&self) -> usize {
        self.synsets.values().map(|s| s.hypernyms.len()).sum()
    }

    /// All synsets from which `root` is reachable along hypernym edges, `root` included.
    pub fn descendants_of(&self, root: &SynsetId) -> BTreeSet<SynsetId> {
        let mut hyponyms: BTreeMap<&SynsetId, Vec<&SynsetId>> = BTreeMap::new();
        for synset in self.synsets.values() {
            for h in &synset.hypernyms {
                hyponyms.entry(h).or_default().push(&synset.id);
            }
        }
        let mut seen = BTreeSet::new();
        let mut queue = VecDeque::from([root]);
        while let Some(id) = queue.pop_front() {
            if !seen.insert(id.clone()) {
                continue;
            }
            if let Some(children) = hyponyms.get(id) {
                queue.extend(children.iter().copied());
            }
        }
        seen
    }

    /// Resolves a root given either as a synset id or as a lemma (first sense).
    pub fn resolve_root(&self, root: &str) -> Result<SynsetId, LexiconError> {
        let as_id = SynsetId::new(root);
        if self.synsets.contains_key(&as_id) {
            return Ok(as_id);
        }
        self.synsets_of(&normalize_lemma(root))
            .first()
            .cloned()
            .ok_or_else(|| LexiconError::UnknownRoot(root.to_string()))
    }
}

/// Animal lexicon: synset graph plus the curated canonicalization tables.
#[derive(Debug, Clone)]
pub struct Lexicon {
    graph: SynsetGraph,
    animal_root: SynsetId,
    animal_synsets: BTreeSet<SynsetId>,
    aliases: BTreeMap<String, String>,
    rollup_targets: BTreeSet<String>,
    exclusions: BTreeSet<String>,
    min_count: u64,
}

impl Lexicon {
    /// `animal_root` may be a synset id or a lemma such as `"animal"`.
    pub fn new(graph: SynsetGraph, animal_root: &str) -> Result<Self, LexiconError> {
        let animal_root = graph.resolve_root(animal_root)?;
        let animal_synsets = graph.descendants_of(&animal_root);
        Ok(Self {
            graph,
            animal_root,
            animal_synsets,
            aliases: BTreeMap::new(),
            rollup_targets: BTreeSet::new(),
            exclusions: BTreeSet::new(),
            min_count: DEFAULT_MIN_COUNT,
        })
    }

    /// Installs the alias table; canonical names must map to themselves.
    pub fn with_aliases(mut self, aliases: BTreeMap<String, String>) -> Result<Self, LexiconError> {
        for (variant, canonical) in &aliases {
            if let Some(next) = aliases.get(canonical) {
                if next != canonical {
                    return Err(LexiconError::AliasNotIdempotent {
                        variant: variant.clone(),
                        canonical: canonical.clone(),
                        next: next.clone(),
                    });
                }
            }
        }
        self.aliases = aliases;
        self.check_exclusions()?;
        Ok(self)
    }

    pub fn with_exclusions(mut self, exclusions: BTreeSet<String>) -> Result<Self, LexiconError> {
        self.exclusions = exclusions;
        self.check_exclusions()?;
        Ok(self)
    }

    pub fn with_rollup_targets(mut self, targets: BTreeSet<String>) -> Self {
        self.rollup_targets = targets;
        self
    }

    pub fn with_min_count(mut self, min_count: u64) -> Self {
        self.min_count = min_count;
        self
    }

    fn check_exclusions(&self) -> Result<(), LexiconError> {
        match self.aliases.values().find(|t| self.exclusions.contains(*t)) {
            Some(target) => Err(LexiconError::ExcludedAliasTarget(target.clone())),
            None => Ok(()),
        }
    }

    pub fn graph(&self) -> &SynsetGraph {
        &self.graph
    }

    pub fn animal_root(&self) -> &SynsetId {
        &self.animal_root
    }

    pub fn aliases(&self) -> &BTreeMap<String, String> {
        &self.aliases
    }

    pub fn rollup_targets(&self) -> &BTreeSet<String> {
        &self.rollup_targets
    }

    pub fn exclusions(&self) -> &BTreeSet<String> {
        &self.exclusions
    }

    pub fn min_count(&self) -> u64 {
        self.min_count
    }

    fn animal_senses<'a>(&'a self, lemma: &str) -> impl Iterator<Item = &'a SynsetId> + 'a {
        self.graph
            .synsets_of(lemma)
            .iter()
            .filter(|id| self.animal_synsets.contains(*id))
    }

    /// True when `lemma` is not excluded and one of its synsets reaches the animal root.
    pub fn is_animal(&self, lemma: &str) -> bool {
        !self.exclusions.contains(lemma) && self.animal_senses(lemma).next().is_some()
    }

    /// Alias lookup for an animal lemma; unmapped lemmas are their own canonical name.
    pub fn canonicalize(&self, lemma: &str) -> Result<String, LexiconError> {
        if !self.is_animal(lemma) {
            return Err(LexiconError::NotAnAnimal(lemma.to_string()));
        }
        Ok(self.alias_of(lemma).to_string())
    }

    /// Alias lookup without the animal check.
    pub fn alias_of<'a>(&'a self, lemma: &'a str) -> &'a str {
        self.aliases.get(lemma).map_or(lemma, String::as_str)
    }

    /// Maps every name with `count < min_count` to its nearest hypernym ancestor
    /// listed in the rollup targets; everything else maps to itself.
    ///
    /// The search is breadth-first over hypernym edges starting from the name's
    /// animal senses (depth 0 included). Ties at the same depth go to the
    /// lexicographically smallest target. A target that is itself an alias
    /// variant is reported under its canonical name.
    pub fn apply_rollup(&self, counts: &BTreeMap<String, u64>) -> BTreeMap<String, String> {
        counts
            .iter()
            .map(|(name, &count)| {
                let target = if count < self.min_count {
                    self.nearest_rollup_target(name)
                        .map(|t| self.alias_of(&t).to_string())
                        .unwrap_or_else(|| name.clone())
                } else {
                    name.clone()
                };
                (name.clone(), target)
            })
            .collect()
    }

    fn nearest_rollup_target(&self, name: &str) -> Option<String> {
        if self.rollup_targets.contains(name) {
            return Some(name.to_string());
        }
        let mut starts: Vec<&SynsetId> = self.animal_senses(name).collect();
        if starts.is_empty() {
            starts = self.graph.synsets_of(name).iter().collect();
        }
        let mut seen: BTreeSet<&SynsetId> = starts.iter().copied().collect();
        let mut frontier = starts;
        while !frontier.is_empty() {
            let best = frontier
                .iter()
                .filter_map(|id| self.graph.get(id))
                .flat_map(|s| s.words.iter())
                .filter(|w| self.rollup_targets.contains(*w))
                .min();
            if let Some(best) = best {
                return Some(best.clone());
            }
            let mut next = Vec::new();
            for id in frontier {
                if let Some(synset) = self.graph.get(id) {
                    for h in &synset.hypernyms {
                        if seen.insert(h) {
                            next.push(h);
                        }
                    }
                }
            }
            frontier = next;
        }
        None
    }
}
