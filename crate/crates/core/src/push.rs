//! Bounded local iteration: asynchronous residual pushing with a FIFO work
//! queue, and the shifted variant that tolerates zero opinions.
//!
//! Throughout a run the estimate `z_hat` and residual `r` satisfy
//! `z - z_hat = (I + L)^{-1} r`, where `z` is the equilibrium of the opinions
//! the run was seeded with. Pushing node `v` moves `r_v / (1 + d_v)` into
//! `z_hat_v` and adds the same amount to the residual of every node that
//! listens to `v`, i.e. the in-neighbors of `v`.

use std::collections::VecDeque;
use std::time::Instant;

use crate::error::{Error, Result};
use crate::exact::DenseOracle;
use crate::graph::Graph;
use crate::opinion::OpinionVector;
use crate::result::{EstimateResult, Method};

pub const DEFAULT_EPSILON: f64 = 1e-2;
pub const DEFAULT_SIGMA: f64 = 1e-5;
pub const DEFAULT_C: f64 = 1e-5;
pub const DEFAULT_MAX_PUSHES: u64 = 1_000_000_000;

#[derive(Debug, Clone, Copy)]
pub struct PushOptions {
    /// Watchdog: abort once this many pushes have been performed.
    pub max_pushes: u64,
}

impl Default for PushOptions {
    fn default() -> Self {
        Self {
            max_pushes: DEFAULT_MAX_PUSHES,
        }
    }
}

/// Mutable state of one push run.
#[derive(Debug, Clone)]
pub struct PushState {
    pub(crate) z_hat: Vec<f64>,
    pub(crate) residual: Vec<f64>,
    pub(crate) threshold: Vec<f64>,
    pub(crate) queue: VecDeque<usize>,
    pub(crate) in_queue: Vec<bool>,
    pub(crate) pushes: u64,
    pub(crate) touched_arcs: u64,
}

impl PushState {
    /// `z_hat = 0`, `r = residual`, every node queued in ascending order.
    pub fn new(residual: Vec<f64>, threshold: Vec<f64>) -> Self {
        let n = residual.len();
        debug_assert_eq!(threshold.len(), n);
        Self {
            z_hat: vec![0.0; n],
            residual,
            threshold,
            queue: (0..n).collect(),
            in_queue: vec![true; n],
            pushes: 0,
            touched_arcs: 0,
        }
    }

    pub fn z_hat(&self) -> &[f64] {
        &self.z_hat
    }

    pub fn residual(&self) -> &[f64] {
        &self.residual
    }

    /// Boundary vector `h`; a node is pushed while its residual exceeds it.
    pub fn threshold(&self) -> &[f64] {
        &self.threshold
    }

    pub fn queue(&self) -> &VecDeque<usize> {
        &self.queue
    }

    pub fn is_queued(&self, v: usize) -> bool {
        self.in_queue[v]
    }

    pub fn pushes(&self) -> u64 {
        self.pushes
    }

    pub fn touched_arcs(&self) -> u64 {
        self.touched_arcs
    }

    /// `max_v (|r_v| - h_v)`; non-positive once a run has terminated.
    pub fn certificate(&self) -> f64 {
        self.residual
            .iter()
            .zip(&self.threshold)
            .map(|(r, h)| r.abs() - h)
            .fold(f64::NEG_INFINITY, f64::max)
    }

    #[inline]
    pub(crate) fn enqueue_if(&mut self, u: usize, over: bool) {
        if over && !self.in_queue[u] {
            self.in_queue[u] = true;
            self.queue.push_back(u);
        }
    }
}

/// Called after every push with the popped node and the updated state.
pub trait PushObserver {
    fn after_push(&mut self, popped: usize, state: &PushState);
}

/// Observer that does nothing.
#[derive(Debug, Default, Clone, Copy)]
pub struct NoObserver;

impl PushObserver for NoObserver {
    #[inline]
    fn after_push(&mut self, _: usize, _: &PushState) {}
}

impl<F: FnMut(usize, &PushState)> PushObserver for F {
    fn after_push(&mut self, popped: usize, state: &PushState) {
        self(popped, state)
    }
}

/// Forwards every `every`-th push to `inner`.
pub struct Checkpoint<F> {
    pub every: u64,
    pub inner: F,
}

impl<F: FnMut(&PushState)> PushObserver for Checkpoint<F> {
    fn after_push(&mut self, _: usize, state: &PushState) {
        if self.every > 0 && state.pushes.is_multiple_of(self.every) {
            (self.inner)(state)
        }
    }
}

pub(crate) fn check_epsilon(epsilon: f64) -> Result<()> {
    if epsilon > 0.0 && epsilon < 1.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "epsilon must lie in (0, 1), got {epsilon}"
        )))
    }
}

pub(crate) fn check_shift(sigma: f64, c: f64) -> Result<()> {
    if !(sigma > 0.0 && sigma.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "sigma must be positive, got {sigma}"
        )));
    }
    if !(c > 0.0 && c.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "c must be positive, got {c}"
        )));
    }
    Ok(())
}

/// `epsilon' = sigma * epsilon / (c + sigma)`, the tolerance the shifted run
/// needs so that nodes with `z_v > sigma` keep relative error `epsilon`.
pub fn shifted_epsilon(epsilon: f64, sigma: f64, c: f64) -> f64 {
    sigma * epsilon / (c + sigma)
}

/// Residual seed and thresholds for a shifted run: `s + c` and
/// `epsilon' (s + c)`.
pub(crate) fn shifted_seed(
    s: &OpinionVector,
    epsilon_shifted: f64,
    c: f64,
) -> (Vec<f64>, Vec<f64>) {
    let seed: Vec<f64> = s.as_slice().iter().map(|&v| v + c).collect();
    let threshold = seed.iter().map(|&v| epsilon_shifted * v).collect();
    (seed, threshold)
}

/// Pushes until the queue is empty.
pub(crate) fn run_bli<O: PushObserver + ?Sized>(
    graph: &Graph,
    state: &mut PushState,
    opts: &PushOptions,
    observer: &mut O,
) -> Result<()> {
    while let Some(v) = state.queue.pop_front() {
        state.in_queue[v] = false;
        if state.pushes >= opts.max_pushes {
            return Err(Error::Watchdog {
                pushes: state.pushes,
            });
        }
        let share = state.residual[v] / (1.0 + graph.degree(v) as f64);
        state.z_hat[v] += share;
        let listeners = graph.in_neighbors(v);
        for &u in listeners {
            state.residual[u] += share;
            let over = state.residual[u] > state.threshold[u];
            state.enqueue_if(u, over);
        }
        state.residual[v] = 0.0;
        state.pushes += 1;
        state.touched_arcs += listeners.len() as u64;
        observer.after_push(v, state);
    }
    Ok(())
}

fn finish(method: Method, state: PushState, shift: f64, started: Instant) -> EstimateResult {
    let mut z_hat = state.z_hat;
    if shift != 0.0 {
        for z in &mut z_hat {
            *z -= shift;
        }
    }
    let mut out = EstimateResult::new(method, z_hat);
    out.pushes = state.pushes;
    out.touched_arcs = state.touched_arcs;
    out.wall_time = started.elapsed().as_secs_f64();
    out
}

/// Plain bounded local iteration with thresholds `h = epsilon * s`.
///
/// On return `(1 - epsilon) z_v <= z_hat_v <= z_v` for every node. Nodes with
/// `s_v = 0` may keep the queue alive indefinitely, in which case the
/// watchdog fires.
pub fn bound_local_iter(graph: &Graph, s: &OpinionVector, epsilon: f64) -> Result<EstimateResult> {
    bound_local_iter_with(graph, s, epsilon, &PushOptions::default(), &mut NoObserver)
}

pub fn bound_local_iter_with<O: PushObserver + ?Sized>(
    graph: &Graph,
    s: &OpinionVector,
    epsilon: f64,
    opts: &PushOptions,
    observer: &mut O,
) -> Result<EstimateResult> {
    s.check_len(graph.num_nodes())?;
    check_epsilon(epsilon)?;
    let started = Instant::now();
    let threshold = s.as_slice().iter().map(|&v| epsilon * v).collect();
    let mut state = PushState::new(s.as_slice().to_vec(), threshold);
    run_bli(graph, &mut state, opts, observer)?;
    let mut out = finish(Method::BliRaw, state, 0.0, started);
    out.epsilon = Some(epsilon);
    Ok(out)
}

/// Bounded local iteration on the shifted opinions `s + c`, tolerance
/// `epsilon'`, with `c` subtracted at the end. Every threshold is positive so
/// the run always terminates; the relative bound holds for nodes with
/// `z_v > sigma`.
pub fn improved_bli(
    graph: &Graph,
    s: &OpinionVector,
    epsilon: f64,
    sigma: f64,
    c: f64,
) -> Result<EstimateResult> {
    improved_bli_with(
        graph,
        s,
        epsilon,
        sigma,
        c,
        &PushOptions::default(),
        &mut NoObserver,
    )
}

/// As [`improved_bli`]; the observer sees the shifted state (before `c` is
/// subtracted), whose invariant refers to the opinions `s + c`.
pub fn improved_bli_with<O: PushObserver + ?Sized>(
    graph: &Graph,
    s: &OpinionVector,
    epsilon: f64,
    sigma: f64,
    c: f64,
    opts: &PushOptions,
    observer: &mut O,
) -> Result<EstimateResult> {
    s.check_len(graph.num_nodes())?;
    check_epsilon(epsilon)?;
    check_shift(sigma, c)?;
    let started = Instant::now();
    let eps_shifted = shifted_epsilon(epsilon, sigma, c);
    let (seed, threshold) = shifted_seed(s, eps_shifted, c);
    let mut state = PushState::new(seed, threshold);
    run_bli(graph, &mut state, opts, observer)?;
    let mut out = finish(Method::Bli, state, c, started);
    out.epsilon = Some(epsilon);
    out.sigma = Some(sigma);
    out.c = Some(c);
    Ok(out)
}

/// Dense check of `z - z_hat = (I + L)^{-1} r` for one set of seed opinions.
pub struct ResidualInvariant {
    oracle: DenseOracle,
    z: Vec<f64>,
}

impl ResidualInvariant {
    /// `s_effective` is what the residual was seeded with (`s`, or `s + c`
    /// for the shifted variants).
    pub fn new(graph: &Graph, s_effective: &[f64]) -> Result<Self> {
        let oracle = DenseOracle::new(graph)?;
        let z = oracle.solve(s_effective)?;
        Ok(Self { oracle, z })
    }

    pub fn equilibrium(&self) -> &[f64] {
        &self.z
    }

    /// `max_v |(z - z_hat)_v - ((I + L)^{-1} r)_v|`.
    pub fn gap(&self, state: &PushState) -> Result<f64> {
        let propagated = self.oracle.solve(state.residual())?;
        Ok(self
            .z
            .iter()
            .zip(state.z_hat())
            .zip(&propagated)
            .map(|((z, zh), p)| ((z - zh) - p).abs())
            .fold(0.0, f64::max))
    }
}

/// One-shot form of [`ResidualInvariant::gap`].
pub fn residual_invariant_gap(
    graph: &Graph,
    s_effective: &[f64],
    state: &PushState,
) -> Result<f64> {
    ResidualInvariant::new(graph, s_effective)?.gap(state)
}
