//! File formats.
//!
//! Digraph (JSON): `{"vertices": m, "edges": [[u, v], ...], "undirected": b}`
//! with the flag optional and defaulting to directed; text alternative:
//! first line `m`, then one `u v` pair per line. Operation (JSON):
//! `{"arity": n, "domain": m, "table": [...]}` with the leftmost argument
//! most significant. Alpha matrix (JSON): an `n x n` array of vertices.
//!
//! Parse failures carry the file path and the position reported by the JSON
//! parser (or the offending line number for the text form).

use std::path::Path;

use serde::Deserialize;

use crate::algebra::op::OpTable;
use crate::construction::AlphaMatrix;
use crate::digraph::Digraph;
use crate::error::{Error, Result};

#[derive(Debug, Deserialize)]
struct GraphFile {
    vertices: usize,
    edges: Vec<(usize, usize)>,
    #[serde(default)]
    undirected: bool,
}

#[derive(Debug, Deserialize)]
struct OpFile {
    arity: usize,
    domain: usize,
    table: Vec<usize>,
}

fn read(path: &Path) -> Result<String> {
    std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

fn json_err(path: &Path, e: serde_json::Error) -> Error {
    Error::Parse {
        path: path.to_path_buf(),
        detail: format!("line {}, column {}: {e}", e.line(), e.column()),
    }
}

pub fn parse_digraph_text(text: &str) -> std::result::Result<Digraph, String> {
    let mut lines = text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty());
    let (_, first) = lines.next().ok_or("empty graph file")?;
    let vertices: usize = first
        .trim()
        .parse()
        .map_err(|_| format!("line 1: expected a vertex count, found `{}`", first.trim()))?;
    let mut edges = Vec::new();
    for (i, line) in lines {
        let mut it = line.split_whitespace();
        let parse = |tok: Option<&str>| {
            tok.and_then(|s| s.parse::<usize>().ok())
                .ok_or(format!("line {}: expected `u v`, found `{}`", i + 1, line.trim()))
        };
        let u = parse(it.next())?;
        let v = parse(it.next())?;
        if it.next().is_some() {
            return Err(format!("line {}: trailing tokens after `u v`", i + 1));
        }
        edges.push((u, v));
    }
    Digraph::directed(vertices, &edges).map_err(|e| e.to_string())
}

/// Load a digraph, sniffing JSON (leading `{`) versus the text form.
pub fn load_digraph(path: &Path) -> Result<Digraph> {
    let text = read(path)?;
    if text.trim_start().starts_with('{') {
        let file: GraphFile = serde_json::from_str(&text).map_err(|e| json_err(path, e))?;
        Digraph::new(file.vertices, &file.edges, file.undirected)
    } else {
        parse_digraph_text(&text).map_err(|detail| Error::Parse {
            path: path.to_path_buf(),
            detail,
        })
    }
}

pub fn load_op(path: &Path) -> Result<OpTable> {
    let text = read(path)?;
    let file: OpFile = serde_json::from_str(&text).map_err(|e| json_err(path, e))?;
    OpTable::new(file.arity, file.domain, file.table)
}

pub fn load_alpha(path: &Path) -> Result<AlphaMatrix> {
    let text = read(path)?;
    let rows: Vec<Vec<usize>> = serde_json::from_str(&text).map_err(|e| json_err(path, e))?;
    AlphaMatrix::new(rows)
}
