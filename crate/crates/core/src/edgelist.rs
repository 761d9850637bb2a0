//! Plain-text edge lists.
//!
//! One edge per line, `<label_a> <label_b> <weight>`, whitespace separated.
//! `#` starts a comment. Repeated lines are parallel edges and `a a w` is a
//! loop. Vertices are numbered in order of first appearance.

use std::collections::HashMap;
use std::fmt::Write as _;

use crate::error::{Error, Result};
use crate::graph::{EdgeRecord, WeightedMultigraph};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum ParseWarning {
    /// The graph parsed but has several components; metric operations will refuse it.
    Disconnected { components: usize },
}

#[derive(Debug, Clone)]
pub struct ParsedGraph {
    pub graph: WeightedMultigraph,
    pub warnings: Vec<ParseWarning>,
}

pub fn parse_edge_list(text: &str) -> Result<ParsedGraph> {
    let mut labels: Vec<String> = Vec::new();
    let mut index: HashMap<String, usize> = HashMap::new();
    let mut edges = Vec::new();

    for (lineno, raw) in text.lines().enumerate() {
        let line = raw.split('#').next().unwrap_or("").trim();
        if line.is_empty() {
            continue;
        }
        let tokens: Vec<&str> = line.split_whitespace().collect();
        if tokens.len() != 3 {
            return Err(Error::Parse {
                line: lineno + 1,
                message: format!("expected `<a> <b> <weight>`, found {} tokens", tokens.len()),
            });
        }
        let weight: f64 = tokens[2].parse().map_err(|_| Error::Parse {
            line: lineno + 1,
            message: format!("invalid weight `{}`", tokens[2]),
        })?;
        if !(weight > 0.0) || !weight.is_finite() {
            return Err(Error::Parse {
                line: lineno + 1,
                message: format!("edge weight must be positive, got {weight}"),
            });
        }
        let mut vertex = |label: &str| -> usize {
            *index.entry(label.to_string()).or_insert_with(|| {
                labels.push(label.to_string());
                labels.len() - 1
            })
        };
        let a = vertex(tokens[0]);
        let b = vertex(tokens[1]);
        edges.push(EdgeRecord::new(a, b, weight));
    }

    let graph = WeightedMultigraph::new(labels, edges)?;
    let components = graph.components(None).len();
    let warnings = if components > 1 {
        vec![ParseWarning::Disconnected { components }]
    } else {
        Vec::new()
    };
    Ok(ParsedGraph { graph, warnings })
}

/// Writes one line per edge record. Weights use the shortest representation
/// that parses back to the same `f64`.
///
/// Isolated vertices cannot be expressed in this format; vertex order is
/// preserved whenever every vertex is incident to an edge listed before any
/// later vertex first appears.
pub fn serialize_edge_list(g: &WeightedMultigraph) -> String {
    let mut out = String::new();
    for e in g.edges() {
        let _ = writeln!(out, "{} {} {}", g.labels()[e.a], g.labels()[e.b], e.weight);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn single_edge_is_k2() {
        let parsed = parse_edge_list("1 2 1.0\n").unwrap();
        assert_eq!(parsed.graph.order(), 2);
        assert_eq!(parsed.graph.adjacency()[(0, 1)], 1.0);
        assert!(parsed.warnings.is_empty());
    }

    #[test]
    fn lone_loop_is_rejected() {
        assert!(matches!(
            parse_edge_list("1 1 2.5"),
            Err(Error::TooFewVertices(1))
        ));
    }

    #[test]
    fn duplicate_lines_are_parallel_edges() {
        let parsed = parse_edge_list("1 2 0.5\n1 2 0.5\n").unwrap();
        assert_eq!(parsed.graph.edges().len(), 2);
        assert_eq!(parsed.graph.adjacency()[(0, 1)], 1.0);
    }

    #[test]
    fn comments_and_labels() {
        let text = "# header\nb a 2 # trailing\n\na c 0.25\n";
        let parsed = parse_edge_list(text).unwrap();
        assert_eq!(parsed.graph.labels(), &["b", "a", "c"]);
        assert_eq!(parsed.graph.adjacency()[(0, 1)], 2.0);
        assert_eq!(parsed.graph.adjacency()[(1, 2)], 0.25);
    }

    #[test]
    fn malformed_lines() {
        assert!(matches!(parse_edge_list("1 2"), Err(Error::Parse { line: 1, .. })));
        assert!(matches!(
            parse_edge_list("1 2 1\n1 3 x"),
            Err(Error::Parse { line: 2, .. })
        ));
        assert!(matches!(
            parse_edge_list("1 2 -1"),
            Err(Error::Parse { line: 1, .. })
        ));
        assert!(matches!(
            parse_edge_list("1 2 0"),
            Err(Error::Parse { line: 1, .. })
        ));
    }

    #[test]
    fn disconnected_is_a_warning() {
        let parsed = parse_edge_list("1 2 1\n3 4 1\n").unwrap();
        assert_eq!(
            parsed.warnings,
            vec![ParseWarning::Disconnected { components: 2 }]
        );
    }

    #[test]
    fn round_trip() {
        let text = "x y 0.1\ny z 1.4142135623730951\nz z 3\nx y 0.1\n";
        let g = parse_edge_list(text).unwrap().graph;
        let again = parse_edge_list(&serialize_edge_list(&g)).unwrap().graph;
        assert_eq!(g, again);
    }
}
