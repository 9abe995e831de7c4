//! Synthetic graph families used by tests, benches and the CLI.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use super::Graph;

/// G(n, p), undirected or directed, in O(n + m) expected time by skipping
/// geometrically distributed gaps over the candidate pairs.
pub fn erdos_renyi(n: usize, p: f64, directed: bool, seed: u64) -> Graph {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut arcs = Vec::new();
    if n >= 2 && p > 0.0 {
        let slots: u64 = if directed {
            (n as u64) * (n as u64 - 1)
        } else {
            (n as u64) * (n as u64 - 1) / 2
        };
        let log_q = (1.0 - p).ln();
        let mut idx: u64 = 0;
        loop {
            if p < 1.0 {
                let u: f64 = rng.random();
                let skip = ((1.0 - u).ln() / log_q).floor();
                if skip >= (slots - idx) as f64 {
                    break;
                }
                idx += skip as u64;
            }
            if idx >= slots {
                break;
            }
            arcs.push(if directed {
                directed_slot(n, idx)
            } else {
                undirected_slot(idx)
            });
            idx += 1;
        }
    }
    Graph::from_arcs(n, arcs, directed).expect("generated ids are in range")
}

fn directed_slot(n: usize, idx: u64) -> (usize, usize) {
    let row = (idx / (n as u64 - 1)) as usize;
    let col = (idx % (n as u64 - 1)) as usize;
    (row, if col >= row { col + 1 } else { col })
}

/// Slot `idx` enumerates pairs `(i, j)` with `j < i` row by row.
fn undirected_slot(idx: u64) -> (usize, usize) {
    let mut i = ((((8 * idx + 1) as f64).sqrt() + 1.0) / 2.0) as u64;
    while i * (i - 1) / 2 > idx {
        i -= 1;
    }
    while (i + 1) * i / 2 <= idx {
        i += 1;
    }
    let j = idx - i * (i - 1) / 2;
    (i as usize, j as usize)
}

/// Preferential attachment: a clique on `m + 1` seed nodes, then each new
/// node links to `m` distinct existing nodes chosen proportionally to degree.
pub fn barabasi_albert(n: usize, m: usize, seed: u64) -> Graph {
    assert!(m >= 1, "attachment count must be positive");
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let core = (m + 1).min(n);
    let mut arcs = Vec::new();
    let mut endpoints = Vec::new();
    for i in 0..core {
        for j in 0..i {
            arcs.push((i, j));
            endpoints.extend([i, j]);
        }
    }
    let mut picked = Vec::with_capacity(m);
    for v in core..n {
        picked.clear();
        while picked.len() < m {
            let t = endpoints[rng.random_range(0..endpoints.len())];
            if !picked.contains(&t) {
                picked.push(t);
            }
        }
        for &t in &picked {
            arcs.push((v, t));
            endpoints.extend([v, t]);
        }
    }
    Graph::from_arcs(n, arcs, false).expect("generated ids are in range")
}

/// `rows x cols` 4-neighbor lattice.
pub fn grid_2d(rows: usize, cols: usize) -> Graph {
    let id = |r: usize, c: usize| r * cols + c;
    let mut arcs = Vec::new();
    for r in 0..rows {
        for c in 0..cols {
            if c + 1 < cols {
                arcs.push((id(r, c), id(r, c + 1)));
            }
            if r + 1 < rows {
                arcs.push((id(r, c), id(r + 1, c)));
            }
        }
    }
    Graph::from_arcs(rows * cols, arcs, false).expect("generated ids are in range")
}

pub fn path(n: usize) -> Graph {
    Graph::from_arcs(n, (1..n).map(|i| (i - 1, i)), false).expect("generated ids are in range")
}

pub fn complete(n: usize) -> Graph {
    let arcs = (0..n).flat_map(|i| (0..i).map(move |j| (i, j)));
    Graph::from_arcs(n, arcs, false).expect("generated ids are in range")
}

/// Copy of a directed graph in which the given nodes listen to nobody.
pub fn strip_out_arcs(graph: &Graph, nodes: &[usize]) -> Graph {
    let mut dangling = vec![false; graph.num_nodes()];
    for &v in nodes {
        dangling[v] = true;
    }
    let arcs = graph.arcs().filter(|&(u, _)| !dangling[u]);
    Graph::from_arcs(graph.num_nodes(), arcs, true).expect("subset of valid arcs")
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    #[test]
    fn undirected_slots_enumerate_pairs() {
        let mut idx = 0;
        for i in 1..50u64 {
            for j in 0..i {
                assert_eq!(undirected_slot(idx), (i as usize, j as usize));
                idx += 1;
            }
        }
    }

    #[test]
    fn directed_slots_skip_diagonal() {
        let n = 7;
        let all: BTreeSet<_> = (0..(n * (n - 1)) as u64)
            .map(|i| directed_slot(n, i))
            .collect();
        assert_eq!(all.len(), n * (n - 1));
        assert!(all.iter().all(|&(u, v)| u != v && u < n && v < n));
    }

    #[test]
    fn er_density() {
        let n = 2000;
        let g = erdos_renyi(n, 0.005, false, 11);
        let expected = 0.005 * (n * (n - 1) / 2) as f64;
        let sd = expected.sqrt();
        assert!((g.num_edges() as f64 - expected).abs() < 5.0 * sd);
        let d = erdos_renyi(300, 0.02, true, 5);
        let expected = 0.02 * 300.0 * 299.0;
        assert!((d.num_edges() as f64 - expected).abs() < 5.0 * expected.sqrt());
        assert_eq!(erdos_renyi(10, 1.0, false, 0).num_edges(), 45);
        assert_eq!(erdos_renyi(10, 0.0, true, 0).num_edges(), 0);
    }

    #[test]
    fn er_transpose_large() {
        let g = erdos_renyi(1000, 0.01, true, 3);
        let forward: BTreeSet<_> = g.arcs().collect();
        let reverse: BTreeSet<_> = (0..g.num_nodes())
            .flat_map(|v| g.in_neighbors(v).iter().map(move |&u| (u, v)))
            .collect();
        assert_eq!(forward, reverse);
    }

    #[test]
    fn ba_edge_count() {
        let g = barabasi_albert(500, 3, 1);
        assert_eq!(g.num_edges(), 3 * 4 / 2 + (500 - 4) * 3);
        assert!(g.degrees().iter().all(|&d| d >= 3));
    }

    #[test]
    fn small_families() {
        assert_eq!(grid_2d(20, 20).num_edges(), 2 * 20 * 19);
        assert_eq!(path(4).degrees(), vec![1, 2, 2, 1]);
        assert_eq!(complete(5).num_edges(), 10);
        let g = Graph::from_arcs(3, [(0, 1), (1, 2), (2, 0)], true).unwrap();
        let h = strip_out_arcs(&g, &[1]);
        assert_eq!(h.degrees(), vec![1, 0, 1]);
    }
}
