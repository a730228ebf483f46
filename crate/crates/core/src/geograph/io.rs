//! Plain-text edge lists.
//!
//! ```text
//! # comments start with '#'
//! n 4
//! 0 1
//! 1 2
//! ```
//!
//! The `n <count>` line is mandatory because isolated vertices change some
//! statistics. The writer emits each edge once, `u < v`, in sorted order.

use std::io::{BufRead, Write};

use super::{Graph, Vertex};
use crate::error::{Error, Result};

pub fn read_edge_list<R: BufRead>(input: R) -> Result<Graph> {
    let mut n: Option<usize> = None;
    let mut edges = Vec::new();
    for (idx, line) in input.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let err = |message: String| Error::Parse { line: lineno, message };
        let text = line.trim();
        if text.is_empty() || text.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = text.split_whitespace().collect();
        let Some(count) = n else {
            match fields.as_slice() {
                ["n", count] => {
                    let count: usize = count.parse().map_err(|_| err(format!("invalid vertex count `{count}`")))?;
                    if count > Vertex::MAX as usize {
                        return Err(err(format!("vertex count {count} is too large")));
                    }
                    n = Some(count);
                    continue;
                }
                _ => return Err(err("expected `n <count>` before any edge".into())),
            }
        };
        let [u, v] = fields.as_slice() else {
            return Err(err(format!("expected `u v`, found `{text}`")));
        };
        let parse = |s: &str| -> Result<Vertex> {
            let label: u64 = s.parse().map_err(|_| err(format!("invalid vertex label `{s}`")))?;
            if label >= count as u64 {
                return Err(err(format!("vertex label {label} out of range for n = {count}")));
            }
            Ok(label as Vertex)
        };
        let (u, v) = (parse(u)?, parse(v)?);
        if u == v {
            return Err(err(format!("self-loop at vertex {u}")));
        }
        edges.push((u, v));
    }
    let n = n.ok_or(Error::Parse {
        line: 1,
        message: "missing `n <count>` header".into(),
    })?;
    Graph::from_edges(n, edges)
}

pub fn write_edge_list<W: Write>(graph: &Graph, mut out: W) -> Result<()> {
    writeln!(out, "n {}", graph.n())?;
    for (u, v) in graph.edges() {
        writeln!(out, "{u} {v}")?;
    }
    out.flush()?;
    Ok(())
}
