//! Edge-list text format.
//!
//! ```text
//! # optional comment lines
//! <n> <m>
//! <u> <v>      (m lines, 0 <= u < v < n, no duplicates)
//! ```
//!
//! Writers emit edges in lexicographic order, so a graph has exactly one
//! serialization (comments aside).

use std::fs;
use std::io::{BufRead, BufReader, Read, Write};
use std::path::Path;

use crate::error::{GraphError, ParseError};
use crate::graph::{build_graph, Graph};

pub fn read_edge_list<R: Read>(reader: R) -> Result<Graph, ParseError> {
    let mut header: Option<(usize, usize)> = None;
    let mut edges = Vec::new();
    let mut seen = std::collections::HashSet::new();

    for (idx, line) in BufReader::new(reader).lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut fields = trimmed.split_ascii_whitespace();
        let mut num = |what: &str| -> Result<usize, ParseError> {
            let tok = fields.next().ok_or_else(|| ParseError::Syntax {
                line: lineno,
                msg: format!("missing {what}"),
            })?;
            tok.parse().map_err(|_| ParseError::Syntax {
                line: lineno,
                msg: format!("{what} {tok:?} is not a nonnegative integer"),
            })
        };
        let a = num(if header.is_none() {
            "vertex count"
        } else {
            "endpoint"
        })?;
        let b = num(if header.is_none() {
            "edge count"
        } else {
            "endpoint"
        })?;
        if fields.next().is_some() {
            return Err(ParseError::Syntax {
                line: lineno,
                msg: "expected exactly two fields".into(),
            });
        }
        let Some((n, _)) = header else {
            header = Some((a, b));
            continue;
        };
        if a >= n || b >= n {
            return Err(ParseError::Graph {
                line: lineno,
                source: GraphError::EndpointOutOfRange { u: a, v: b, n },
            });
        }
        if a == b {
            return Err(ParseError::Graph {
                line: lineno,
                source: GraphError::SelfLoop(a),
            });
        }
        if a > b {
            return Err(ParseError::Syntax {
                line: lineno,
                msg: format!("edge ({a}, {b}) must be written with the smaller endpoint first"),
            });
        }
        if !seen.insert((a, b)) {
            return Err(ParseError::Syntax {
                line: lineno,
                msg: format!("duplicate edge ({a}, {b})"),
            });
        }
        edges.push((a, b));
    }

    let (n, m) = header.ok_or(ParseError::MissingHeader)?;
    if edges.len() != m {
        return Err(ParseError::EdgeCount {
            declared: m,
            found: edges.len(),
        });
    }
    build_graph(n, &edges)
        .map(|b| b.graph)
        .map_err(|source| ParseError::Graph { line: 0, source })
}

pub fn read_edge_list_file(path: impl AsRef<Path>) -> Result<Graph, ParseError> {
    read_edge_list(fs::File::open(path)?)
}

pub fn write_edge_list<W: Write>(g: &Graph, mut w: W) -> std::io::Result<()> {
    writeln!(w, "{} {}", g.n(), g.m())?;
    for (u, v) in g.edges() {
        writeln!(w, "{u} {v}")?;
    }
    Ok(())
}

/// Writes comment lines (each prefixed with `# `) before the graph.
pub fn write_edge_list_with_comments<W: Write>(
    g: &Graph,
    comments: &[String],
    mut w: W,
) -> std::io::Result<()> {
    for c in comments {
        writeln!(w, "# {c}")?;
    }
    write_edge_list(g, w)
}

pub fn to_edge_list_string(g: &Graph) -> String {
    let mut buf = Vec::new();
    write_edge_list(g, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("edge lists are ASCII")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn writes_sorted_edges() {
        let g = Graph::from_edges(4, &[(2, 3), (1, 0), (0, 3)]).unwrap();
        assert_eq!(to_edge_list_string(&g), "4 3\n0 1\n0 3\n2 3\n");
    }

    #[test]
    fn reads_with_comments() {
        let text = "# a comment\n\n5 2\n# inner\n0 1\n3 4\n";
        let g = read_edge_list(text.as_bytes()).unwrap();
        assert_eq!((g.n(), g.m()), (5, 2));
        assert!(g.has_edge(4, 3));
    }

    #[test]
    fn round_trip() {
        let g = Graph::cycle(7);
        let back = read_edge_list(to_edge_list_string(&g).as_bytes()).unwrap();
        assert_eq!(g, back);
    }

    #[test]
    fn rejects_malformed() {
        let cases = [
            ("", "missing header"),
            ("3 1\n0 3\n", "outside"),
            ("3 1\n1 1\n", "self-loop"),
            ("3 1\n2 1\n", "smaller endpoint"),
            ("3 2\n0 1\n0 1\n", "duplicate"),
            ("3 2\n0 1\n", "declares 2"),
            ("3 1\n0 x\n", "not a nonnegative"),
            ("3 1\n0 1 2\n", "exactly two"),
        ];
        for (text, needle) in cases {
            let err = read_edge_list(text.as_bytes()).unwrap_err().to_string();
            assert!(err.contains(needle), "{text:?}: {err}");
        }
    }
}
