//! Equilibrium estimation by sampling spanning converging forests.
//!
//! Wilson's loop-erased construction run against an absorbing sink: at node
//! `v` the walk is absorbed with probability `1 / (1 + d_v)` (and `v` becomes
//! a root) or steps to a uniform out-neighbor. The resulting root of node `i`
//! is `u` with probability `[(I + L)^{-1}]_{iu}`, so averaging `s` at the
//! roots gives an unbiased estimate of `z`.

use std::time::Instant;

use rand::Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::opinion::OpinionVector;
use crate::par;
use crate::result::{EstimateResult, Method};
use crate::walk::{step, stream_rng};

pub const DEFAULT_SAMPLES: usize = 2000;

/// Forests are drawn in blocks; block `b` uses RNG stream `b`, so results do
/// not depend on the number of worker threads.
const BLOCK: usize = 64;

const NONE: usize = usize::MAX;

/// One sampled converging forest.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ForestRoots {
    root: Vec<usize>,
    next: Vec<usize>,
}

impl ForestRoots {
    pub fn roots(&self) -> &[usize] {
        &self.root
    }

    pub fn root(&self, i: usize) -> usize {
        self.root[i]
    }

    /// Tree successor of `i`; `None` for roots.
    pub fn successor(&self, i: usize) -> Option<usize> {
        (self.next[i] != NONE).then_some(self.next[i])
    }
}

/// Reusable buffers for repeated sampling on one graph.
struct Sampler {
    in_tree: Vec<bool>,
    next: Vec<usize>,
    root: Vec<usize>,
}

impl Sampler {
    fn new(n: usize) -> Self {
        Self {
            in_tree: vec![false; n],
            next: vec![NONE; n],
            root: vec![NONE; n],
        }
    }

    fn sample<R: Rng + ?Sized>(&mut self, graph: &Graph, rng: &mut R) {
        self.in_tree.fill(false);
        for i in 0..graph.num_nodes() {
            // Random walk until absorbed or the current forest is hit;
            // overwriting `next` erases loops.
            let mut u = i;
            while !self.in_tree[u] {
                match step(graph, u, rng) {
                    None => {
                        self.next[u] = NONE;
                        break;
                    }
                    Some(v) => {
                        self.next[u] = v;
                        u = v;
                    }
                }
            }
            let root = if self.in_tree[u] { self.root[u] } else { u };
            let mut u = i;
            while !self.in_tree[u] {
                self.in_tree[u] = true;
                self.root[u] = root;
                if self.next[u] == NONE {
                    break;
                }
                u = self.next[u];
            }
        }
    }
}

/// Draws one converging forest.
pub fn random_forest<R: Rng + ?Sized>(graph: &Graph, rng: &mut R) -> ForestRoots {
    let mut sampler = Sampler::new(graph.num_nodes());
    sampler.sample(graph, rng);
    ForestRoots {
        root: sampler.root,
        next: sampler.next,
    }
}

fn check_samples(samples: usize) -> Result<()> {
    if samples == 0 {
        return Err(Error::InvalidParameter(
            "sample count must be at least 1".into(),
        ));
    }
    Ok(())
}

/// Runs `visit` on every forest of every block, then merges the per-block
/// accumulators in block order.
fn blocked<T, F, M>(
    graph: &Graph,
    samples: usize,
    seed: u64,
    init: impl Fn() -> T + Sync + Send,
    visit: F,
    merge: M,
) -> T
where
    T: Send,
    F: Fn(&mut T, &[usize]) + Sync + Send,
    M: Fn(&mut T, T),
{
    let blocks = samples.div_ceil(BLOCK);
    let parts = par::map_range(blocks, |b| {
        let mut rng = stream_rng(seed, b as u64);
        let mut sampler = Sampler::new(graph.num_nodes());
        let mut acc = init();
        let count = BLOCK.min(samples - b * BLOCK);
        for _ in 0..count {
            sampler.sample(graph, &mut rng);
            visit(&mut acc, &sampler.root);
        }
        acc
    });
    let mut total = init();
    for part in parts {
        merge(&mut total, part);
    }
    total
}

/// `z_hat_i = (1 / l) sum over l forests of s_{root(i)}`.
pub fn forest_sample(
    graph: &Graph,
    s: &OpinionVector,
    samples: usize,
    seed: u64,
) -> Result<EstimateResult> {
    s.check_len(graph.num_nodes())?;
    check_samples(samples)?;
    let started = Instant::now();
    let n = graph.num_nodes();
    let values = s.as_slice();
    // Offsets from s_i: constant opinions and self-rooted nodes stay exact.
    let offsets = blocked(
        graph,
        samples,
        seed,
        || vec![0.0f64; n],
        |acc, roots| {
            for (i, a) in acc.iter_mut().enumerate() {
                *a += values[roots[i]] - values[i];
            }
        },
        |total, part| total.iter_mut().zip(part).for_each(|(t, p)| *t += p),
    );
    let (lo, hi) = (s.min(), s.max());
    let z_hat = values
        .iter()
        .zip(&offsets)
        .map(|(&si, &off)| (si + off / samples as f64).clamp(lo, hi))
        .collect();
    let mut out = EstimateResult::new(Method::Forest, z_hat);
    out.samples = samples as u64;
    out.wall_time = started.elapsed().as_secs_f64();
    Ok(out)
}

/// Empirical root distribution over `samples` forests, row-major `n x n`:
/// entry `(i, u)` is the fraction of forests in which `u` is the root of `i`.
pub fn root_distribution(graph: &Graph, samples: usize, seed: u64) -> Result<Vec<f64>> {
    check_samples(samples)?;
    let n = graph.num_nodes();
    let counts = blocked(
        graph,
        samples,
        seed,
        || vec![0u32; n * n],
        |acc, roots| {
            for (i, &r) in roots.iter().enumerate() {
                acc[i * n + r] += 1;
            }
        },
        |total, part| total.iter_mut().zip(part).for_each(|(t, p)| *t += p),
    );
    Ok(counts
        .into_iter()
        .map(|c| c as f64 / samples as f64)
        .collect())
}
