//! Edge-list text format: a header line `n m`, then `m` lines `u v w`.
//! Lines starting with `#` and blank lines are skipped.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::fs;
use std::path::Path;

use super::{Edge, Graph, GraphError, VertexId, Weight};

fn syntax(line: usize, reason: impl Into<String>) -> GraphError {
    GraphError::Parse {
        line,
        reason: reason.into(),
    }
}

fn at_line(line: usize, err: GraphError) -> GraphError {
    GraphError::AtLine {
        line,
        source: Box::new(err),
    }
}

fn field<T: std::str::FromStr>(
    tok: Option<&str>,
    line: usize,
    what: &str,
) -> Result<T, GraphError> {
    let tok = tok.ok_or_else(|| syntax(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| syntax(line, format!("invalid {what} {tok:?}")))
}

pub fn parse_graph(text: &str) -> Result<Graph, GraphError> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines.next().ok_or_else(|| syntax(1, "missing header"))?;
    let mut toks = header.split_whitespace();
    let n: usize = field(toks.next(), hline, "vertex count")?;
    let m: usize = field(toks.next(), hline, "edge count")?;
    if toks.next().is_some() {
        return Err(syntax(hline, "trailing tokens after header"));
    }
    if n > VertexId::MAX as usize + 1 {
        return Err(at_line(hline, GraphError::TooManyVertices(n)));
    }

    let mut edges = Vec::with_capacity(m);
    let mut seen = HashSet::with_capacity(m);
    let mut last_line = hline;
    for (lineno, l) in lines {
        last_line = lineno;
        if edges.len() == m {
            return Err(syntax(lineno, format!("more than {m} edges")));
        }
        let mut toks = l.split_whitespace();
        let a: u64 = field(toks.next(), lineno, "endpoint")?;
        let b: u64 = field(toks.next(), lineno, "endpoint")?;
        let w: Weight = field(toks.next(), lineno, "weight")?;
        if toks.next().is_some() {
            return Err(syntax(lineno, "trailing tokens after edge"));
        }
        for x in [a, b] {
            if x >= n as u64 {
                return Err(at_line(
                    lineno,
                    GraphError::EndpointOutOfRange { vertex: x, n },
                ));
            }
        }
        let e = Edge::new(a as VertexId, b as VertexId, w).map_err(|err| at_line(lineno, err))?;
        if !seen.insert(e.endpoints()) {
            return Err(at_line(lineno, GraphError::DuplicateEdge(e.u(), e.v())));
        }
        edges.push(e);
    }
    if edges.len() != m {
        return Err(syntax(
            last_line,
            format!("header promises {m} edges, found {}", edges.len()),
        ));
    }
    Graph::new(n, edges)
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<Graph, GraphError> {
    parse_graph(&fs::read_to_string(path)?)
}

pub fn render_graph(g: &Graph) -> String {
    let mut out = String::with_capacity(16 * (g.m() + 1));
    let _ = writeln!(out, "{} {}", g.n(), g.m());
    for e in g.edges() {
        let _ = writeln!(out, "{e}");
    }
    out
}

pub fn write_graph(g: &Graph, path: impl AsRef<Path>) -> Result<(), GraphError> {
    fs::write(path, render_graph(g))?;
    Ok(())
}
