//! Plain-text edge-list format.
//!
//! ```text
//! n m
//! u v      (m lines, 0 <= u < v < n)
//! ```
//!
//! Edges are written in lexicographic order, one per line, each line
//! terminated by `\n`.

use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::Graph;

pub fn write_edge_list<W: Write>(g: &Graph, mut out: W) -> Result<()> {
    writeln!(out, "{} {}", g.node_count(), g.edge_count())?;
    for (u, v) in g.edges() {
        writeln!(out, "{u} {v}")?;
    }
    out.flush()?;
    Ok(())
}

pub fn to_edge_list_string(g: &Graph) -> String {
    let mut buf = Vec::new();
    write_edge_list(g, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("edge list is ASCII")
}

fn parse_pair(line: &str, lineno: usize) -> Result<(usize, usize)> {
    let bad = |message: String| Error::Parse {
        line: lineno,
        message,
    };
    let mut it = line.split_ascii_whitespace();
    let a = it
        .next()
        .ok_or_else(|| bad("expected two integers".into()))?;
    let b = it
        .next()
        .ok_or_else(|| bad("expected two integers".into()))?;
    if it.next().is_some() {
        return Err(bad("trailing tokens".into()));
    }
    let a = a
        .parse()
        .map_err(|_| bad(format!("not an integer: {a:?}")))?;
    let b = b
        .parse()
        .map_err(|_| bad(format!("not an integer: {b:?}")))?;
    Ok((a, b))
}

pub fn read_edge_list<R: BufRead>(input: R) -> Result<Graph> {
    let mut lines = input
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !matches!(l, Ok(s) if s.trim().is_empty()));
    let (lineno, header) = lines.next().ok_or(Error::Parse {
        line: 1,
        message: "missing header".into(),
    })?;
    let (n, m) = parse_pair(&header?, lineno)?;
    let mut edges = Vec::with_capacity(m);
    for (lineno, line) in lines {
        let (u, v) = parse_pair(&line?, lineno)?;
        if !(u < v && v < n) {
            return Err(Error::Parse {
                line: lineno,
                message: format!("edge ({u}, {v}) violates 0 <= u < v < {n}"),
            });
        }
        edges.push((u, v));
    }
    if edges.len() != m {
        return Err(Error::Parse {
            line: 1,
            message: format!("header declares {m} edges, found {}", edges.len()),
        });
    }
    Graph::from_edges(n, &edges)
}

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    read_edge_list(text.as_bytes())
}
