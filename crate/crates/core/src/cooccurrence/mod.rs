//! Substitution-adjusted animal co-occurrence graph.

pub(crate) mod export;

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::extraction::{AnimalPair, MentionTable, PairMode};

pub use export::{export_graph, GraphFormat, GRAY_RAMP, MAX_PENWIDTH, MIN_PENWIDTH};

#[derive(Debug, Error)]
pub enum GraphError {
    #[error("substitutions for {pair} ({substitutions}) exceed its co-occurrence count ({combinations})")]
    SubstitutionExceedsCombinations {
        pair: AnimalPair,
        substitutions: u64,
        combinations: u64,
    },
    #[error("graph JSON: {0}")]
    Json(#[from] serde_json::Error),
    #[error("graph document is inconsistent: {0}")]
    Inconsistent(String),
    #[error("unknown graph format {0:?} (expected dot, graphml or json)")]
    UnknownFormat(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Undirected weighted graph over canonical animal names.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct CooccurrenceGraph {
    /// Canonical name to corpus-wide mention count.
    pub nodes: BTreeMap<String, u64>,
    pub edges: BTreeMap<AnimalPair, u64>,
    /// Strict lower bound the edges were filtered with, if any.
    pub threshold: Option<u64>,
}

/// Counts co-occurrences per tale and subtracts the recorded substitution pairs.
///
/// In [`PairMode::Set`] a pair gains one per tale containing both animals; in
/// [`PairMode::Multiset`] it gains the product of their mention counts.
pub fn build_graph(table: &MentionTable) -> Result<CooccurrenceGraph, GraphError> {
    let mut edges: BTreeMap<AnimalPair, u64> = BTreeMap::new();
    for (tale, set) in &table.per_tale_sets {
        let names: Vec<&String> = set.iter().collect();
        let per_tale = match table.pair_mode {
            PairMode::Set => BTreeMap::new(),
            PairMode::Multiset => table.tale_mention_counts(*tale),
        };
        for (i, a) in names.iter().enumerate() {
            for b in &names[i + 1..] {
                let pair =
                    AnimalPair::new(a.as_str(), b.as_str()).expect("set members are distinct");
                let add = match table.pair_mode {
                    PairMode::Set => 1,
                    PairMode::Multiset => per_tale[a.as_str()] * per_tale[b.as_str()],
                };
                *edges.entry(pair).or_insert(0) += add;
            }
        }
    }
    for (pair, substitutions) in table.total_substitutions() {
        let combinations = edges.get(&pair).copied().unwrap_or(0);
        if substitutions > combinations {
            return Err(GraphError::SubstitutionExceedsCombinations {
                pair,
                substitutions,
                combinations,
            });
        }
        edges.insert(pair, combinations - substitutions);
    }
    Ok(CooccurrenceGraph {
        nodes: table.counts.clone(),
        edges,
        threshold: None,
    })
}

/// Keeps edges with weight strictly above `min_weight` and drops isolated nodes.
pub fn filter_graph(g: &CooccurrenceGraph, min_weight: u64) -> CooccurrenceGraph {
    let edges: BTreeMap<AnimalPair, u64> = g
        .edges
        .iter()
        .filter(|(_, &w)| w > min_weight)
        .map(|(p, w)| (p.clone(), *w))
        .collect();
    let nodes = g
        .nodes
        .iter()
        .filter(|(name, _)| edges.keys().any(|p| p.contains(name)))
        .map(|(n, c)| (n.clone(), *c))
        .collect();
    CooccurrenceGraph {
        nodes,
        edges,
        threshold: Some(g.threshold.map_or(min_weight, |t| t.max(min_weight))),
    }
}

impl CooccurrenceGraph {
    pub fn weight(&self, a: &str, b: &str) -> Option<u64> {
        AnimalPair::new(a, b).and_then(|p| self.edges.get(&p).copied())
    }

    pub fn to_json(&self) -> Result<String, GraphError> {
        let mut out = Vec::new();
        export_graph(self, GraphFormat::Json, &mut out)?;
        Ok(String::from_utf8(out).expect("JSON export is UTF-8"))
    }

    pub fn from_json(json: &str) -> Result<Self, GraphError> {
        let doc: GraphDocument = serde_json::from_str(json)?;
        doc.into_graph()
    }
}

#[derive(Serialize, Deserialize)]
pub(crate) struct GraphDocument {
    pub threshold: Option<u64>,
    pub nodes: Vec<NodeRecord>,
    pub edges: Vec<EdgeRecord>,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct NodeRecord {
    pub name: String,
    pub count: u64,
}

#[derive(Serialize, Deserialize)]
pub(crate) struct EdgeRecord {
    pub source: String,
    pub target: String,
    pub weight: u64,
}

impl GraphDocument {
    pub(crate) fn from_graph(g: &CooccurrenceGraph) -> Self {
        Self {
            threshold: g.threshold,
            nodes: g
                .nodes
                .iter()
                .map(|(name, &count)| NodeRecord {
                    name: name.clone(),
                    count,
                })
                .collect(),
            edges: g
                .edges
                .iter()
                .map(|(p, &weight)| EdgeRecord {
                    source: p.first().to_string(),
                    target: p.second().to_string(),
                    weight,
                })
                .collect(),
        }
    }

    fn into_graph(self) -> Result<CooccurrenceGraph, GraphError> {
        let nodes: BTreeMap<String, u64> =
            self.nodes.into_iter().map(|n| (n.name, n.count)).collect();
        let mut edges = BTreeMap::new();
        for e in self.edges {
            if !nodes.contains_key(&e.source) || !nodes.contains_key(&e.target) {
                return Err(GraphError::Inconsistent(format!(
                    "edge {}--{} references a missing node",
                    e.source, e.target
                )));
            }
            let pair = AnimalPair::new(e.source.clone(), e.target)
                .ok_or_else(|| GraphError::Inconsistent(format!("self-loop on {}", e.source)))?;
            if edges.insert(pair.clone(), e.weight).is_some() {
                return Err(GraphError::Inconsistent(format!("duplicate edge {pair}")));
            }
        }
        Ok(CooccurrenceGraph {
            nodes,
            edges,
            threshold: self.threshold,
        })
    }
}
