//! Whitespace-separated edge lists (SNAP / Koblenz style).

use std::collections::HashMap;
use std::io::{BufRead, Write};

use super::Graph;
use crate::error::{Error, Result};

/// Parses an edge list, compacting node ids to `[0, n)` in order of first
/// appearance.
pub fn load_edge_list<R: BufRead>(reader: R, directed: bool) -> Result<Graph> {
    load_edge_list_with_ids(reader, directed).map(|(g, _)| g)
}

/// Like [`load_edge_list`], also returning the original id of every node.
///
/// Lines that are self-loops are skipped before ids are assigned, so every
/// node of the returned graph has at least one incident arc.
pub fn load_edge_list_with_ids<R: BufRead>(reader: R, directed: bool) -> Result<(Graph, Vec<u64>)> {
    let mut index: HashMap<u64, usize> = HashMap::new();
    let mut ids: Vec<u64> = Vec::new();
    let mut arcs = Vec::new();

    let mut intern = |raw: u64, ids: &mut Vec<u64>| -> usize {
        *index.entry(raw).or_insert_with(|| {
            ids.push(raw);
            ids.len() - 1
        })
    };

    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = lineno + 1;
        let body = line.trim();
        if body.is_empty() || body.starts_with('#') || body.starts_with('%') {
            continue;
        }
        let mut tokens = body.split_whitespace();
        let (Some(a), Some(b), None) = (tokens.next(), tokens.next(), tokens.next()) else {
            return Err(Error::Parse {
                line: lineno,
                msg: format!("expected two node ids, got {body:?}"),
            });
        };
        let parse = |tok: &str| {
            tok.parse::<u64>().map_err(|_| Error::Parse {
                line: lineno,
                msg: format!("{tok:?} is not a non-negative integer node id"),
            })
        };
        let (a, b) = (parse(a)?, parse(b)?);
        if a == b {
            continue;
        }
        let u = intern(a, &mut ids);
        let v = intern(b, &mut ids);
        arcs.push((u, v));
    }

    if ids.is_empty() {
        return Err(Error::EmptyGraph);
    }
    let graph = Graph::from_arcs(ids.len(), arcs, directed)?;
    Ok((graph, ids))
}

/// Writes the graph as an edge list, undirected edges once.
///
/// Lines are grouped by their larger endpoint so that node `k` is never
/// mentioned before node `k - 1`. Any graph produced by [`load_edge_list`]
/// reloads with identical ids. Other graphs reload as an isomorphic copy
/// (the loader numbers nodes by first appearance), and isolated nodes are
/// lost.
pub fn write_edge_list<W: Write>(graph: &Graph, mut out: W) -> Result<()> {
    let n = graph.num_nodes();
    let mut by_max: Vec<Vec<(usize, usize)>> = vec![Vec::new(); n];
    for (u, v) in graph.edges() {
        by_max[u.max(v)].push((u, v));
    }
    let mut seen = vec![false; n];
    for (k, mut lines) in by_max.into_iter().enumerate() {
        // When both k-1 and k are still unseen they entered together as the
        // pair "k-1 k"; that arc must lead.
        if k > 0 && !seen[k - 1] {
            if let Some(pos) = lines.iter().position(|&arc| arc == (k - 1, k)) {
                let arc = lines.remove(pos);
                lines.insert(0, arc);
            }
        }
        for (u, v) in lines {
            seen[u] = true;
            seen[v] = true;
            writeln!(out, "{u} {v}")?;
        }
    }
    Ok(())
}
