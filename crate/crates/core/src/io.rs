//! Plain-text formats: edge lists, degree-sequence files, JSON sample lines.

use std::io::{BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::degseq::DegreeSequence;
use crate::error::{Error, Result};
use crate::graph::LoopyGraph;

/// Reads an edge list: an optional `# n=<count>` header, then one `u v` pair
/// per line. Other `#` lines and blank lines are skipped. Without a header
/// the vertex count is one more than the largest label.
pub fn read_edge_list<R: BufRead>(reader: R) -> Result<LoopyGraph> {
    let mut n: Option<usize> = None;
    let mut pairs = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::Parse(e.to_string()))?;
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        if let Some(rest) = line.strip_prefix('#') {
            if let Some(count) = rest.trim().strip_prefix("n=") {
                let count = count
                    .trim()
                    .parse()
                    .map_err(|_| Error::Parse(format!("line {}: bad vertex count", lineno + 1)))?;
                n = Some(count);
            }
            continue;
        }
        let mut fields = line.split_whitespace();
        let mut label = || -> Result<u32> {
            fields.next().and_then(|f| f.parse().ok()).ok_or_else(|| {
                Error::Parse(format!("line {}: expected two vertex labels", lineno + 1))
            })
        };
        let (u, v) = (label()?, label()?);
        if fields.next().is_some() {
            return Err(Error::Parse(format!(
                "line {}: trailing fields",
                lineno + 1
            )));
        }
        pairs.push((u, v));
    }
    let n = n.unwrap_or_else(|| {
        pairs
            .iter()
            .map(|&(u, v)| u.max(v) as usize + 1)
            .max()
            .unwrap_or(0)
    });
    LoopyGraph::build(n, pairs)
}

pub fn write_edge_list<W: Write>(g: &LoopyGraph, mut w: W) -> std::io::Result<()> {
    writeln!(w, "# n={}", g.vertex_count())?;
    for e in g.sorted_edges() {
        let (u, v) = e.endpoints();
        writeln!(w, "{u} {v}")?;
    }
    Ok(())
}

/// One sequence per line; blank lines and `#` comments are skipped.
pub fn read_sequences<R: BufRead>(reader: R) -> Result<Vec<DegreeSequence>> {
    let mut out = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::Parse(e.to_string()))?;
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let ds = line
            .parse()
            .map_err(|e: Error| Error::Parse(format!("line {}: {e}", lineno + 1)))?;
        out.push(ds);
    }
    Ok(out)
}

#[derive(Serialize, Deserialize)]
struct SampleLine {
    edges: Vec<[u32; 2]>,
}

/// `{"edges":[[u,v],...]}` with edges in canonical order.
pub fn sample_json(g: &LoopyGraph) -> String {
    let line = SampleLine {
        edges: g
            .sorted_edges()
            .iter()
            .map(|e| {
                let (u, v) = e.endpoints();
                [u, v]
            })
            .collect(),
    };
    serde_json::to_string(&line).expect("plain data serializes")
}

pub fn parse_sample_json(line: &str, vertex_count: usize) -> Result<LoopyGraph> {
    let s: SampleLine = serde_json::from_str(line).map_err(|e| Error::Parse(e.to_string()))?;
    LoopyGraph::build(vertex_count, s.edges.into_iter().map(|[u, v]| (u, v)))
}
