//! Co-occurrence edges drawn over the animal biplot.

use std::collections::BTreeMap;
use std::io::Write;

use thiserror::Error;

use crate::cooccurrence::export::{penwidth, weight_fraction};
use crate::cooccurrence::CooccurrenceGraph;
use crate::pca::biplot::{write_arrows, write_points, Xy, POINT_COLOR};
use crate::pca::{Biplot, PcaError};
use crate::scalar::Scalar;
use crate::svg::{num, Frame};

const MOTIF_ARROW_COLOR: &str = "#d5a6a1";
const UNLINKED_POINT_COLOR: &str = "#9e9e9e";
const EDGE_COLOR: &str = "#3c3c3c";

#[derive(Debug, Error)]
pub enum OverlayError {
    #[error("none of the {nodes} graph nodes has biplot coordinates")]
    EmptyIntersection { nodes: usize },
    #[error(transparent)]
    Pca(#[from] PcaError),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

/// Renders the visible edges of `g` between the animals' biplot points and
/// returns one diagnostic per graph node that has no coordinates.
pub fn render_overlay<T: Scalar>(
    g: &CooccurrenceGraph,
    biplot: &Biplot<T>,
    out: &mut dyn Write,
) -> Result<Vec<String>, OverlayError> {
    let (pts, arrows) = biplot.to_f64()?;
    let coords: BTreeMap<&str, (f64, f64)> = biplot
        .row_labels
        .iter()
        .map(String::as_str)
        .zip(pts.iter().copied())
        .collect();

    let diagnostics: Vec<String> = g
        .nodes
        .keys()
        .filter(|n| !coords.contains_key(n.as_str()))
        .map(|n| format!("overlay: dropped node {n:?} (no biplot coordinates)"))
        .collect();
    if diagnostics.len() == g.nodes.len() {
        return Err(OverlayError::EmptyIntersection {
            nodes: g.nodes.len(),
        });
    }

    let edges: Vec<(Xy, Xy, u64)> = g
        .visible_edges()
        .filter_map(|(pair, w)| Some((*coords.get(pair.first())?, *coords.get(pair.second())?, w)))
        .collect();
    let (lo, hi) = edges
        .iter()
        .fold((u64::MAX, 0), |(lo, hi), e| (lo.min(e.2), hi.max(e.2)));

    let frame = Frame::around(pts.iter().chain(&arrows).copied());
    frame.open(out, "Co-occurrence network over the animal biplot")?;
    frame.axes(out)?;
    write_arrows(out, &frame, &biplot.var_labels, &arrows, MOTIF_ARROW_COLOR)?;

    writeln!(
        out,
        r#"<g class="edges" stroke="{EDGE_COLOR}" stroke-opacity="0.6" stroke-linecap="round">"#
    )?;
    for ((x1, y1), (x2, y2), w) in &edges {
        let f = weight_fraction(*w, lo, hi);
        writeln!(
            out,
            r#"<line x1="{}" y1="{}" x2="{}" y2="{}" stroke-width="{}"><title>{w}</title></line>"#,
            num(*x1),
            num(-y1),
            num(*x2),
            num(-y2),
            num(penwidth(f) * frame.px())
        )?;
    }
    writeln!(out, "</g>")?;

    let (linked, unlinked): (Vec<usize>, Vec<usize>) =
        (0..pts.len()).partition(|&i| g.nodes.contains_key(&biplot.row_labels[i]));
    for (group, color) in [(unlinked, UNLINKED_POINT_COLOR), (linked, POINT_COLOR)] {
        let labels: Vec<String> = group
            .iter()
            .map(|&i| biplot.row_labels[i].clone())
            .collect();
        let points: Vec<(f64, f64)> = group.iter().map(|&i| pts[i]).collect();
        write_points(out, &frame, &labels, &points, color)?;
    }
    frame.close(out)?;
    Ok(diagnostics)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::extraction::AnimalPair;

    fn biplot(labels: &[&str], points: Vec<[f64; 2]>) -> Biplot<f64> {
        Biplot {
            row_labels: labels.iter().map(|s| s.to_string()).collect(),
            points,
            var_labels: vec![],
            arrows: vec![],
            loading_scale: 1.0,
        }
    }

    fn graph(edges: &[(&str, &str, u64)]) -> CooccurrenceGraph {
        let mut g = CooccurrenceGraph::default();
        for &(a, b, w) in edges {
            g.nodes.insert(a.to_owned(), 1);
            g.nodes.insert(b.to_owned(), 1);
            g.edges.insert(AnimalPair::new(a, b).unwrap(), w);
        }
        g
    }

    #[test]
    fn two_nodes_one_edge() {
        let mut out = Vec::new();
        let diags = render_overlay(
            &graph(&[("cat", "dog", 3)]),
            &biplot(&["cat", "dog"], vec![[1.0, 0.0], [0.0, 1.0]]),
            &mut out,
        )
        .unwrap();
        assert!(diags.is_empty());
        let svg = String::from_utf8(out).unwrap();
        let edge_lines: Vec<&str> = svg
            .lines()
            .filter(|l| l.contains("<title>3</title>"))
            .collect();
        assert_eq!(edge_lines.len(), 1);
        assert!(
            edge_lines[0].contains(r#"x1="1.000000" y1="0.000000" x2="0.000000" y2="-1.000000""#)
        );
    }

    #[test]
    fn missing_node_dropped_with_diagnostic() {
        let mut out = Vec::new();
        let diags = render_overlay(
            &graph(&[("cat", "dog", 3), ("cat", "owl", 2)]),
            &biplot(&["cat", "dog"], vec![[1.0, 0.0], [0.0, 1.0]]),
            &mut out,
        )
        .unwrap();
        assert_eq!(
            diags,
            vec![r#"overlay: dropped node "owl" (no biplot coordinates)"#.to_owned()]
        );
        let svg = String::from_utf8(out).unwrap();
        assert_eq!(
            svg.matches("<title>").count(),
            2,
            "document title plus one edge"
        );
    }

    #[test]
    fn empty_intersection_is_an_error() {
        let mut out = Vec::new();
        let err = render_overlay(
            &graph(&[("cat", "dog", 3)]),
            &biplot(&["owl"], vec![[1.0, 1.0]]),
            &mut out,
        )
        .unwrap_err();
        assert!(matches!(err, OverlayError::EmptyIntersection { nodes: 2 }));
    }
}
