//! Plain-text graph formats.
//!
//! TSV layout (UTF-8, tab separated, `#` starts a comment line):
//!
//! ```text
//! n	<count>
//! v	<index>	<weight>	[label]
//! e	<u>	<v>	<weight>
//! ```
//!
//! Either every vertex line carries a label or none does. Weights are
//! written with the shortest decimal form that round-trips, so
//! `write_tsv(read_tsv(s)) == s` for anything this module wrote.

use std::collections::HashSet;
use std::fmt::Write as _;
use std::io::{BufRead, Write};

use crate::error::{Error, Result};
use crate::graph::WeightedGraph;

pub fn write_tsv<W: Write>(g: &WeightedGraph, mut out: W) -> Result<()> {
    writeln!(out, "n\t{}", g.n())?;
    for v in 0..g.n() {
        match g.labels() {
            Some(l) => writeln!(out, "v\t{v}\t{}\t{}", g.vertex_weight(v), l[v])?,
            None => writeln!(out, "v\t{v}\t{}", g.vertex_weight(v))?,
        }
    }
    for e in g.edges() {
        writeln!(out, "e\t{}\t{}\t{}", e.u, e.v, e.weight)?;
    }
    Ok(())
}

pub fn to_tsv_string(g: &WeightedGraph) -> String {
    let mut buf = Vec::new();
    write_tsv(g, &mut buf).expect("writing to a Vec cannot fail");
    String::from_utf8(buf).expect("tsv output is utf-8")
}

fn parse_err(line: usize, msg: impl Into<String>) -> Error {
    Error::Parse { line, msg: msg.into() }
}

fn field<T: std::str::FromStr>(tok: Option<&str>, line: usize, what: &str) -> Result<T> {
    let tok = tok.ok_or_else(|| parse_err(line, format!("missing {what}")))?;
    tok.parse().map_err(|_| parse_err(line, format!("bad {what} {tok:?}")))
}

pub fn read_tsv<R: BufRead>(input: R) -> Result<WeightedGraph> {
    let mut n: Option<usize> = None;
    let mut weights: Vec<Option<f64>> = Vec::new();
    let mut labels: Vec<Option<String>> = Vec::new();
    let mut edges = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line_no = idx + 1;
        let line = line?;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let mut toks = trimmed.split_whitespace();
        let kind = toks.next().unwrap_or_default();
        match kind {
            "n" => {
                if n.is_some() {
                    return Err(parse_err(line_no, "repeated header"));
                }
                let count: usize = field(toks.next(), line_no, "vertex count")?;
                n = Some(count);
                weights = vec![None; count];
                labels = vec![None; count];
            }
            "v" | "e" if n.is_none() => return Err(parse_err(line_no, "header `n <count>` must come first")),
            "v" => {
                let v: usize = field(toks.next(), line_no, "vertex index")?;
                let w: f64 = field(toks.next(), line_no, "vertex weight")?;
                if v >= weights.len() {
                    return Err(parse_err(line_no, format!("vertex {v} out of range")));
                }
                if weights[v].replace(w).is_some() {
                    return Err(parse_err(line_no, format!("vertex {v} declared twice")));
                }
                labels[v] = toks.next().map(str::to_string);
            }
            "e" => {
                let u: usize = field(toks.next(), line_no, "edge endpoint")?;
                let v: usize = field(toks.next(), line_no, "edge endpoint")?;
                let w: f64 = field(toks.next(), line_no, "edge weight")?;
                edges.push((u, v, w));
            }
            other => return Err(parse_err(line_no, format!("unknown record {other:?}"))),
        }
        if toks.next().is_some() {
            return Err(parse_err(line_no, "trailing fields"));
        }
    }
    if n.is_none() {
        return Err(parse_err(0, "missing header"));
    }
    let weights: Vec<f64> = weights
        .into_iter()
        .enumerate()
        .map(|(v, w)| w.ok_or_else(|| parse_err(0, format!("vertex {v} not declared"))))
        .collect::<Result<_>>()?;
    let g = WeightedGraph::build(weights.len(), &edges, &weights)?;
    let labelled = labels.iter().filter(|l| l.is_some()).count();
    if labelled == 0 {
        Ok(g)
    } else if labelled == labels.len() {
        g.with_labels(labels.into_iter().map(Option::unwrap).collect())
    } else {
        Err(parse_err(0, "either all vertices or none must be labelled"))
    }
}

pub fn from_tsv_str(s: &str) -> Result<WeightedGraph> {
    read_tsv(s.as_bytes())
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

/// Graphviz rendering with edge weights as labels. Vertices and edges of
/// `highlight` (a vertex sequence) are drawn in red.
pub fn to_dot(g: &WeightedGraph, highlight: Option<&[usize]>) -> String {
    let on_path: HashSet<usize> = highlight.map(|p| p.iter().copied().collect()).unwrap_or_default();
    let path_edges: HashSet<(usize, usize)> = highlight
        .map(|p| p.windows(2).map(|w| (w[0].min(w[1]), w[0].max(w[1]))).collect())
        .unwrap_or_default();
    let mut s = String::from("graph G {\n");
    for v in 0..g.n() {
        let _ = write!(s, "  {v} [label=\"{}\\nw={}\"", dot_escape(&g.label(v)), g.vertex_weight(v));
        if on_path.contains(&v) {
            s.push_str(", color=red, penwidth=2");
        }
        s.push_str("];\n");
    }
    for e in g.edges() {
        let _ = write!(s, "  {} -- {} [label=\"{}\"", e.u, e.v, e.weight);
        if path_edges.contains(&(e.u, e.v)) {
            s.push_str(", color=red, penwidth=2");
        }
        s.push_str("];\n");
    }
    s.push_str("}\n");
    s
}
