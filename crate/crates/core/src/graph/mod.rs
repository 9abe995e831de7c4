//! Immutable sparse graph storage.
//!
//! Arc `(i, j)` means "node `i` listens to node `j`": the out-neighbors of `i`
//! are the nodes whose expressed opinions `i` averages, and `d_i` is the
//! out-degree. For undirected graphs every edge is stored in both directions
//! and the reverse adjacency is the forward adjacency.

mod generators;
mod io;

pub use generators::{barabasi_albert, complete, erdos_renyi, grid_2d, path, strip_out_arcs};
pub use io::{load_edge_list, load_edge_list_with_ids, write_edge_list};

use sha2::{Digest, Sha256};

use crate::error::{Error, Result};

/// Compressed sparse row graph with forward and reverse adjacency.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    n: usize,
    m: usize,
    directed: bool,
    out_offsets: Vec<usize>,
    out_targets: Vec<usize>,
    // Empty for undirected graphs; the forward arrays double as reverse.
    in_offsets: Vec<usize>,
    in_targets: Vec<usize>,
}

impl Graph {
    /// Builds a graph on `n` nodes from an arc list.
    ///
    /// Self-loops and duplicate arcs are dropped. For undirected graphs each
    /// pair is stored symmetrically, so `(0, 1)` and `(1, 0)` collapse into a
    /// single edge.
    pub fn from_arcs<I>(n: usize, arcs: I, directed: bool) -> Result<Self>
    where
        I: IntoIterator<Item = (usize, usize)>,
    {
        let mut pairs = Vec::new();
        for (u, v) in arcs {
            if u >= n {
                return Err(Error::NodeOutOfRange { node: u, n });
            }
            if v >= n {
                return Err(Error::NodeOutOfRange { node: v, n });
            }
            if u == v {
                continue;
            }
            pairs.push((u, v));
            if !directed {
                pairs.push((v, u));
            }
        }
        pairs.sort_unstable();
        pairs.dedup();

        let (out_offsets, out_targets) = csr_from_sorted(n, &pairs);
        let stored = out_targets.len();
        let (in_offsets, in_targets) = if directed {
            transpose(n, &out_offsets, &out_targets)
        } else {
            (Vec::new(), Vec::new())
        };
        Ok(Self {
            n,
            m: if directed { stored } else { stored / 2 },
            directed,
            out_offsets,
            out_targets,
            in_offsets,
            in_targets,
        })
    }

    #[inline]
    pub fn num_nodes(&self) -> usize {
        self.n
    }

    /// Arcs for directed graphs, undirected edges otherwise.
    #[inline]
    pub fn num_edges(&self) -> usize {
        self.m
    }

    #[inline]
    pub fn is_directed(&self) -> bool {
        self.directed
    }

    /// Total number of stored arcs (`2m` for undirected graphs).
    #[inline]
    pub fn num_arcs(&self) -> usize {
        self.out_targets.len()
    }

    /// `d_v`, the number of nodes `v` listens to.
    #[inline]
    pub fn degree(&self, v: usize) -> usize {
        self.out_offsets[v + 1] - self.out_offsets[v]
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.out_offsets.windows(2).map(|w| w[1] - w[0]).collect()
    }

    pub fn max_degree(&self) -> usize {
        self.out_offsets
            .windows(2)
            .map(|w| w[1] - w[0])
            .max()
            .unwrap_or(0)
    }

    /// Nodes that `v` listens to, ascending.
    #[inline]
    pub fn out_neighbors(&self, v: usize) -> &[usize] {
        &self.out_targets[self.out_offsets[v]..self.out_offsets[v + 1]]
    }

    /// Nodes that listen to `v`, ascending.
    #[inline]
    pub fn in_neighbors(&self, v: usize) -> &[usize] {
        if self.directed {
            &self.in_targets[self.in_offsets[v]..self.in_offsets[v + 1]]
        } else {
            self.out_neighbors(v)
        }
    }

    pub fn try_out_neighbors(&self, v: usize) -> Result<&[usize]> {
        self.check_node(v)?;
        Ok(self.out_neighbors(v))
    }

    pub fn try_in_neighbors(&self, v: usize) -> Result<&[usize]> {
        self.check_node(v)?;
        Ok(self.in_neighbors(v))
    }

    pub fn check_node(&self, v: usize) -> Result<()> {
        if v < self.n {
            Ok(())
        } else {
            Err(Error::NodeOutOfRange { node: v, n: self.n })
        }
    }

    pub fn out_offsets(&self) -> &[usize] {
        &self.out_offsets
    }

    pub fn out_targets(&self) -> &[usize] {
        &self.out_targets
    }

    /// All stored arcs `(u, v)` in CSR order.
    pub fn arcs(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        (0..self.n).flat_map(move |u| self.out_neighbors(u).iter().map(move |&v| (u, v)))
    }

    /// Each undirected edge once as `(u, v)` with `u < v`; every arc for
    /// directed graphs.
    pub fn edges(&self) -> impl Iterator<Item = (usize, usize)> + '_ {
        let directed = self.directed;
        self.arcs().filter(move |&(u, v)| directed || u < v)
    }

    /// SHA-256 over the canonical arc list, hex encoded.
    pub fn content_hash(&self) -> String {
        let mut hasher = Sha256::new();
        hasher.update(if self.directed { b"D" } else { b"U" });
        hasher.update((self.n as u64).to_le_bytes());
        for (u, v) in self.arcs() {
            hasher.update((u as u64).to_le_bytes());
            hasher.update((v as u64).to_le_bytes());
        }
        hex::encode(hasher.finalize())
    }
}

fn csr_from_sorted(n: usize, pairs: &[(usize, usize)]) -> (Vec<usize>, Vec<usize>) {
    let mut offsets = vec![0usize; n + 1];
    for &(u, _) in pairs {
        offsets[u + 1] += 1;
    }
    for i in 0..n {
        offsets[i + 1] += offsets[i];
    }
    let targets = pairs.iter().map(|&(_, v)| v).collect();
    (offsets, targets)
}

/// Reverse adjacency by counting sort; rows come out ascending because the
/// sources are scanned in order.
fn transpose(n: usize, offsets: &[usize], targets: &[usize]) -> (Vec<usize>, Vec<usize>) {
    let mut rev_offsets = vec![0usize; n + 1];
    for &v in targets {
        rev_offsets[v + 1] += 1;
    }
    for i in 0..n {
        rev_offsets[i + 1] += rev_offsets[i];
    }
    let mut cursor = rev_offsets.clone();
    let mut rev_targets = vec![0usize; targets.len()];
    for u in 0..n {
        for &v in &targets[offsets[u]..offsets[u + 1]] {
            rev_targets[cursor[v]] = u;
            cursor[v] += 1;
        }
    }
    (rev_offsets, rev_targets)
}
