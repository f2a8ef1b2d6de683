//! Edge-list files.
//!
//! ```text
//! # comment lines start with '#'
//! n m
//! u v w      (m lines, 0-based vertex ids, weight > 0)
//! ```

use std::fs;
use std::io::Write;
use std::path::Path;

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

/// A parsed edge list and the number of duplicate lines merged into earlier
/// edges.
#[derive(Clone, Debug)]
pub struct ParsedGraph {
    pub graph: WeightedGraph,
    pub merged_duplicates: usize,
}

fn parse_err(line: usize, message: impl Into<String>) -> Error {
    Error::Parse {
        line,
        message: message.into(),
    }
}

fn field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse()
        .map_err(|_| parse_err(line, format!("cannot parse {what} from {tok:?}")))
}

pub fn parse_graph(text: &str) -> Result<ParsedGraph> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'));

    let (hline, header) = lines
        .next()
        .ok_or_else(|| parse_err(1, "missing \"n m\" header"))?;
    let mut toks = header.split_whitespace();
    let n: usize = field(toks.next(), hline, "vertex count")?;
    let m: usize = field(toks.next(), hline, "edge count")?;
    if toks.next().is_some() {
        return Err(parse_err(hline, "header has trailing fields"));
    }

    let mut edges = Vec::with_capacity(m);
    let mut last_line = hline;
    for (lineno, l) in lines {
        last_line = lineno;
        if edges.len() == m {
            return Err(parse_err(
                lineno,
                format!("more than the declared {m} edges"),
            ));
        }
        let mut toks = l.split_whitespace();
        let u: usize = field(toks.next(), lineno, "vertex u")?;
        let v: usize = field(toks.next(), lineno, "vertex v")?;
        let w: f64 = field(toks.next(), lineno, "weight")?;
        if toks.next().is_some() {
            return Err(parse_err(lineno, "edge line has trailing fields"));
        }
        if u >= n || v >= n {
            return Err(parse_err(lineno, format!("vertex out of range 0..{n}")));
        }
        if u == v {
            return Err(parse_err(lineno, format!("self-loop at vertex {u}")));
        }
        if !(w.is_finite() && w > 0.0) {
            return Err(parse_err(
                lineno,
                format!("weight must be positive, got {w}"),
            ));
        }
        edges.push((u, v, w));
    }
    if edges.len() != m {
        return Err(parse_err(
            last_line,
            format!("header declares {m} edges, found {}", edges.len()),
        ));
    }
    let (graph, merged_duplicates) = WeightedGraph::with_merge_count(n, edges)?;
    Ok(ParsedGraph {
        graph,
        merged_duplicates,
    })
}

pub fn read_graph(path: impl AsRef<Path>) -> Result<ParsedGraph> {
    parse_graph(&fs::read_to_string(path)?)
}

/// Serializes with shortest round-trip float formatting.
pub fn format_graph(g: &WeightedGraph) -> String {
    let mut s = format!("{} {}\n", g.n(), g.m());
    for e in g.edges() {
        s.push_str(&format!("{} {} {}\n", e.u, e.v, e.w));
    }
    s
}

pub fn write_graph(g: &WeightedGraph, path: impl AsRef<Path>) -> Result<()> {
    write_atomic(path, format_graph(g).as_bytes())
}

/// Writes to a temporary file in the target directory, then renames it into
/// place.
pub fn write_atomic(path: impl AsRef<Path>, bytes: &[u8]) -> Result<()> {
    let path = path.as_ref();
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    tmp.write_all(bytes)?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| Error::Io(e.error))?;
    Ok(())
}
