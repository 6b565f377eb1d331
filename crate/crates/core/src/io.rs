//! Text edge lists: a header line "n m", then m lines "u v" with u < v.
//! Blank lines and lines starting with '#' are ignored.

use crate::error::{Error, Result};
use crate::graph::{Graph, VertexSet};

pub fn parse_edge_list(text: &str) -> Result<Graph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));
    let err = |line, msg: &str| Error::Parse { line, msg: msg.to_string() };
    let pair = |line, l: &str| -> Result<(usize, usize)> {
        let mut it = l.split_whitespace().map(str::parse::<usize>);
        match (it.next(), it.next(), it.next()) {
            (Some(Ok(a)), Some(Ok(b)), None) => Ok((a, b)),
            _ => Err(err(line, "expected two non-negative integers")),
        }
    };
    let (hline, header) = lines.next().ok_or_else(|| err(1, "missing header line"))?;
    let (n, m) = pair(hline, header)?;
    let mut edges = Vec::with_capacity(m);
    let mut last_line = hline;
    for (line, l) in lines {
        let (u, v) = pair(line, l)?;
        if u >= n || v >= n {
            return Err(err(line, &format!("vertex out of range for n = {n}")));
        }
        if u == v {
            return Err(err(line, &format!("self-loop at vertex {u}")));
        }
        if u > v {
            return Err(err(line, "edge endpoints must satisfy u < v"));
        }
        if edges.contains(&(u, v)) {
            return Err(err(line, &format!("duplicate edge {u} {v}")));
        }
        edges.push((u, v));
        last_line = line;
    }
    if edges.len() != m {
        return Err(err(last_line, &format!("header declares {m} edges, found {}", edges.len())));
    }
    Graph::build(n, &edges)
}

pub fn print_edge_list(graph: &Graph) -> String {
    graph.to_string()
}

/// Parses a vertex list such as "2,5" or "{2,5}".
pub fn parse_vertex_set(n: usize, text: &str) -> Result<VertexSet> {
    let body = text.trim().trim_start_matches('{').trim_end_matches('}');
    let mut out = Vec::new();
    for part in body.split(',').map(str::trim).filter(|p| !p.is_empty()) {
        let v = part
            .parse()
            .map_err(|_| Error::Usage(format!("bad vertex '{part}' in '{text}'")))?;
        out.push(v);
    }
    VertexSet::new(n, out)
}
