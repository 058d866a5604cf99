//! DOT, GraphML and JSON writers. Output is sorted and byte-stable.

use std::io::Write;
use std::str::FromStr;

use super::{CooccurrenceGraph, GraphDocument, GraphError};
use crate::extraction::AnimalPair;

pub const MIN_PENWIDTH: f64 = 1.0;
pub const MAX_PENWIDTH: f64 = 8.0;

/// Nine-step sequential ramp from light gray to black.
pub const GRAY_RAMP: [&str; 9] = [
    "#d9d9d9", "#bdbdbd", "#a6a6a6", "#969696", "#737373", "#525252", "#3b3b3b", "#252525",
    "#000000",
];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GraphFormat {
    Dot,
    GraphMl,
    Json,
}

impl FromStr for GraphFormat {
    type Err = GraphError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "dot" => Ok(Self::Dot),
            "graphml" => Ok(Self::GraphMl),
            "json" => Ok(Self::Json),
            _ => Err(GraphError::UnknownFormat(s.to_string())),
        }
    }
}

impl CooccurrenceGraph {
    /// Edges surviving the recorded threshold, in sorted order.
    pub fn visible_edges(&self) -> impl Iterator<Item = (&AnimalPair, u64)> {
        self.edges
            .iter()
            .filter(|(_, &w)| self.threshold.is_none_or(|t| w > t))
            .map(|(p, &w)| (p, w))
    }
}

/// Position of `w` between the smallest and largest visible weight, in [0, 1].
pub(crate) fn weight_fraction(w: u64, min: u64, max: u64) -> f64 {
    if max == min {
        1.0
    } else {
        (w - min) as f64 / (max - min) as f64
    }
}

pub(crate) fn penwidth(fraction: f64) -> f64 {
    MIN_PENWIDTH + (MAX_PENWIDTH - MIN_PENWIDTH) * fraction
}

pub(crate) fn ramp_color(fraction: f64) -> &'static str {
    let idx = (fraction * (GRAY_RAMP.len() - 1) as f64).round() as usize;
    GRAY_RAMP[idx.min(GRAY_RAMP.len() - 1)]
}

pub(crate) fn weight_range(g: &CooccurrenceGraph) -> (u64, u64) {
    g.visible_edges()
        .fold((u64::MAX, 0), |(lo, hi), (_, w)| (lo.min(w), hi.max(w)))
}

fn dot_quote(s: &str) -> String {
    format!("\"{}\"", s.replace('\\', "\\\\").replace('"', "\\\""))
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;")
        .replace('<', "&lt;")
        .replace('>', "&gt;")
        .replace('"', "&quot;")
        .replace('\'', "&apos;")
}

pub fn export_graph(
    g: &CooccurrenceGraph,
    format: GraphFormat,
    out: &mut dyn Write,
) -> Result<(), GraphError> {
    match format {
        GraphFormat::Dot => write_dot(g, out)?,
        GraphFormat::GraphMl => write_graphml(g, out)?,
        GraphFormat::Json => {
            let mut doc = GraphDocument::from_graph(g);
            doc.edges
                .retain(|e| g.threshold.is_none_or(|t| e.weight > t));
            let value = serde_json::to_value(&doc)?;
            serde_json::to_writer_pretty(&mut *out, &value)?;
            out.write_all(b"\n")?;
        }
    }
    Ok(())
}

fn write_dot(g: &CooccurrenceGraph, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, "graph cooccurrence {{")?;
    if let Some(t) = g.threshold {
        writeln!(out, "  // edges with weight > {t}")?;
    }
    writeln!(out, "  node [shape=ellipse, fontname=\"Helvetica\"];")?;
    for (name, count) in &g.nodes {
        writeln!(out, "  {} [count={count}];", dot_quote(name))?;
    }
    let (lo, hi) = weight_range(g);
    for (pair, w) in g.visible_edges() {
        let f = weight_fraction(w, lo, hi);
        writeln!(
            out,
            "  {} -- {} [weight={w}, penwidth={:.2}, color=\"{}\"];",
            dot_quote(pair.first()),
            dot_quote(pair.second()),
            penwidth(f),
            ramp_color(f)
        )?;
    }
    writeln!(out, "}}")
}

fn write_graphml(g: &CooccurrenceGraph, out: &mut dyn Write) -> std::io::Result<()> {
    writeln!(out, r#"<?xml version="1.0" encoding="UTF-8"?>"#)?;
    writeln!(
        out,
        r#"<graphml xmlns="http://graphml.graphdrawing.org/xmlns">"#
    )?;
    writeln!(
        out,
        r#"  <key id="count" for="node" attr.name="count" attr.type="long"/>"#
    )?;
    writeln!(
        out,
        r#"  <key id="weight" for="edge" attr.name="weight" attr.type="long"/>"#
    )?;
    writeln!(
        out,
        r#"  <graph id="cooccurrence" edgedefault="undirected">"#
    )?;
    for (name, count) in &g.nodes {
        writeln!(
            out,
            r#"    <node id="{}"><data key="count">{count}</data></node>"#,
            xml_escape(name)
        )?;
    }
    for (i, (pair, w)) in g.visible_edges().enumerate() {
        writeln!(
            out,
            r#"    <edge id="e{i}" source="{}" target="{}"><data key="weight">{w}</data></edge>"#,
            xml_escape(pair.first()),
            xml_escape(pair.second())
        )?;
    }
    writeln!(out, "  </graph>")?;
    writeln!(out, "</graphml>")
}
