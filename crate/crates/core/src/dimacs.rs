//! DIMACS .col reading and writing.
//!
//! Header `p edge n m`, one `e u v` line per edge with 1-indexed endpoints,
//! `c` comment lines anywhere. Emission is canonical (ascending edges), so
//! parse ∘ emit is the identity on canonical form.

use crate::error::{Error, Result};
use crate::graph::Graph;

pub fn parse_dimacs(text: &str) -> Result<Graph> {
    let mut n: Option<usize> = None;
    let mut declared_m = 0usize;
    let mut edges: Vec<(usize, usize)> = Vec::new();
    for (idx, raw) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = raw.trim();
        if line.is_empty() || line.starts_with('c') {
            continue;
        }
        let mut fields = line.split_ascii_whitespace();
        match fields.next() {
            Some("p") => {
                if n.is_some() {
                    return Err(Error::Parse { line: line_no, msg: "second p-line".into() });
                }
                if fields.next() != Some("edge") {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: "expected `p edge n m`".into(),
                    });
                }
                n = Some(parse_field(fields.next(), line_no, "vertex count")?);
                declared_m = parse_field(fields.next(), line_no, "edge count")?;
            }
            Some("e") => {
                let n = n.ok_or(Error::Parse {
                    line: line_no,
                    msg: "edge before the p-line".into(),
                })?;
                let u: usize = parse_field(fields.next(), line_no, "edge endpoint")?;
                let v: usize = parse_field(fields.next(), line_no, "edge endpoint")?;
                if u == 0 || v == 0 || u > n || v > n {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("endpoint outside 1..={n}"),
                    });
                }
                if u == v {
                    return Err(Error::Parse { line: line_no, msg: "self-loop".into() });
                }
                let (a, b) = (u.min(v) - 1, u.max(v) - 1);
                if edges.contains(&(a, b)) {
                    return Err(Error::Parse {
                        line: line_no,
                        msg: format!("duplicate edge {u} {v}"),
                    });
                }
                edges.push((a, b));
            }
            Some(other) => {
                return Err(Error::Parse {
                    line: line_no,
                    msg: format!("unknown record {other:?}"),
                })
            }
            None => {}
        }
    }
    let n = n.ok_or(Error::Parse { line: 0, msg: "missing p-line".into() })?;
    if edges.len() != declared_m {
        return Err(Error::Parse {
            line: 0,
            msg: format!("header declares {declared_m} edges, file has {}", edges.len()),
        });
    }
    Graph::new(n, &edges)
}

fn parse_field<T: std::str::FromStr>(
    field: Option<&str>,
    line: usize,
    what: &str,
) -> Result<T> {
    field
        .ok_or(Error::Parse { line, msg: format!("missing {what}") })?
        .parse()
        .map_err(|_| Error::Parse { line, msg: format!("bad {what}") })
}

pub fn emit_dimacs(g: &Graph) -> String {
    let mut out = String::new();
    out.push_str(&format!("p edge {} {}\n", g.n(), g.m()));
    for (u, v) in g.edges() {
        out.push_str(&format!("e {} {}\n", u + 1, v + 1));
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::cycle_graph;

    #[test]
    fn roundtrip_cycle() {
        let g = cycle_graph(5);
        let text = emit_dimacs(&g);
        assert_eq!(text.lines().count(), 6);
        let back = parse_dimacs(&text).unwrap();
        assert_eq!(g, back);
        assert_eq!(emit_dimacs(&back), text);
    }

    #[test]
    fn one_indexing() {
        let g = parse_dimacs("p edge 2 1\ne 1 2\n").unwrap();
        assert!(g.has_edge(0, 1));
    }

    #[test]
    fn count_mismatch_names_counts() {
        let err = parse_dimacs("p edge 3 2\ne 1 2\n").unwrap_err();
        let msg = err.to_string();
        assert!(msg.contains('2') && msg.contains('1'), "{msg}");
    }

    #[test]
    fn malformed_line_reports_position() {
        let err = parse_dimacs("c fine\np edge 3 1\ne 1 x\n").unwrap_err();
        assert!(matches!(err, Error::Parse { line: 3, .. }));
    }

    #[test]
    fn comments_and_blanks_ignored() {
        let g = parse_dimacs("c hello\n\np edge 3 1\nc mid\ne 2 3\n").unwrap();
        assert_eq!(g.n(), 3);
        assert!(g.has_edge(1, 2));
    }
}
