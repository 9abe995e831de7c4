//! Monte Carlo estimation through the discounted random walk: at node `j`
//! the walk stops with probability `1 / (1 + d_j)` and otherwise moves to a
//! uniformly chosen node `j` listens to. The stopping node `T` of a walk from
//! `u` satisfies `E[s_T] = z_u`.

use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::opinion::OpinionVector;
use crate::par;
use crate::result::{EstimateResult, Method};

pub const DEFAULT_WALK_LEN: usize = 600;
pub const DEFAULT_NUM_WALKS: usize = 4000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct WalkConfig {
    /// Maximum number of moves before a walk is truncated.
    pub walk_len: usize,
    pub num_walks: usize,
    pub seed: u64,
}

impl Default for WalkConfig {
    fn default() -> Self {
        Self {
            walk_len: DEFAULT_WALK_LEN,
            num_walks: DEFAULT_NUM_WALKS,
            seed: 0,
        }
    }
}

impl WalkConfig {
    fn validate(&self) -> Result<()> {
        if self.walk_len == 0 || self.num_walks == 0 {
            return Err(Error::InvalidParameter(format!(
                "walk length and walk count must be positive, got {self:?}"
            )));
        }
        Ok(())
    }
}

/// Independent stream `stream` of the generator seeded with `seed`.
pub(crate) fn stream_rng(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// One draw decides both whether to stop and where to go: `0` stops (chance
/// `1 / (1 + d)`), `k >= 1` moves to the `k`-th neighbor.
#[inline]
pub(crate) fn step<R: Rng + ?Sized>(graph: &Graph, at: usize, rng: &mut R) -> Option<usize> {
    let nbrs = graph.out_neighbors(at);
    if nbrs.is_empty() {
        return None;
    }
    let k = rng.random_range(0..=nbrs.len());
    (k > 0).then(|| nbrs[k - 1])
}

/// Returns the final node and whether the walk stopped on its own.
fn walk_end<R: Rng + ?Sized>(
    graph: &Graph,
    start: usize,
    walk_len: usize,
    rng: &mut R,
) -> (usize, bool) {
    let mut at = start;
    for _ in 0..walk_len {
        match step(graph, at, rng) {
            None => return (at, true),
            Some(next) => at = next,
        }
    }
    (at, false)
}

/// Simulates one discounted walk from `start`; `None` if it was still
/// running after `walk_len` moves.
pub fn discounted_walk<R: Rng + ?Sized>(
    graph: &Graph,
    start: usize,
    walk_len: usize,
    rng: &mut R,
) -> Option<usize> {
    match walk_end(graph, start, walk_len, rng) {
        (v, true) => Some(v),
        (_, false) => None,
    }
}

/// Mean opinion at the stopping nodes of `num_walks` walks from `u`.
/// Truncated walks contribute the opinion of their last node. Node `u` uses
/// stream `u` of the configured seed, matching [`rwb_all`].
pub fn rwb_estimate(graph: &Graph, s: &OpinionVector, u: usize, cfg: &WalkConfig) -> Result<f64> {
    s.check_len(graph.num_nodes())?;
    graph.check_node(u)?;
    cfg.validate()?;
    Ok(estimate_node(
        graph,
        s.as_slice(),
        u,
        cfg,
        (s.min(), s.max()),
    ))
}

fn estimate_node(graph: &Graph, s: &[f64], u: usize, cfg: &WalkConfig, hull: (f64, f64)) -> f64 {
    let mut rng = stream_rng(cfg.seed, u as u64);
    // Accumulating offsets from s_u keeps constant inputs exact.
    let mut offset = 0.0;
    for _ in 0..cfg.num_walks {
        let (end, _) = walk_end(graph, u, cfg.walk_len, &mut rng);
        offset += s[end] - s[u];
    }
    (s[u] + offset / cfg.num_walks as f64).clamp(hull.0, hull.1)
}

/// [`rwb_estimate`] for every node, in parallel over nodes.
pub fn rwb_all(graph: &Graph, s: &OpinionVector, cfg: &WalkConfig) -> Result<EstimateResult> {
    s.check_len(graph.num_nodes())?;
    cfg.validate()?;
    let started = Instant::now();
    let hull = (s.min(), s.max());
    let values = s.as_slice();
    let z_hat = par::map_range(graph.num_nodes(), |u| {
        estimate_node(graph, values, u, cfg, hull)
    });
    let mut out = EstimateResult::new(Method::Rwb, z_hat);
    out.walks = (graph.num_nodes() * cfg.num_walks) as u64;
    out.wall_time = started.elapsed().as_secs_f64();
    Ok(out)
}

/// Walks per node for absolute error `epsilon_abs` with failure probability
/// `p_fail` on `[0, 1]`-valued samples: `ceil(ln(2 / p_fail) / (2 eps^2))`.
pub fn hoeffding_walks(epsilon_abs: f64, p_fail: f64) -> Result<u64> {
    if !(epsilon_abs > 0.0 && epsilon_abs < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "absolute error must lie in (0, 1), got {epsilon_abs}"
        )));
    }
    if !(p_fail > 0.0 && p_fail < 1.0) {
        return Err(Error::InvalidParameter(format!(
            "failure probability must lie in (0, 1), got {p_fail}"
        )));
    }
    Ok(((2.0 / p_fail).ln() / (2.0 * epsilon_abs * epsilon_abs)).ceil() as u64)
}
