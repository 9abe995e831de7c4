use std::time::Instant;

use fj_core::exact::{iterate_sync, solve_dense, DEFAULT_SYNC_MAX_ITERS, DEFAULT_SYNC_TOL};
use fj_core::forest::forest_sample;
use fj_core::push::{bound_local_iter_with, improved_bli_with, NoObserver, PushOptions};
use fj_core::sor::{
    bound_local_iter_sor_with, improved_blisor_with, omega_opt_dense, omega_sweep_with, OmegaGrid,
    OmegaSelection, DEFAULT_OMEGA,
};
use fj_core::walk::{rwb_all, WalkConfig};
use fj_core::{EstimateResult, Graph, Method, OpinionVector, Result};
use serde::Serialize;

use crate::cli::{OmegaArgs, PushArgs, SamplingArgs};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OmegaChoice {
    /// 1.5 on undirected graphs, a coarse sweep on directed ones.
    Auto,
    Fixed(f64),
    Sweep,
    Formula,
}

impl From<&OmegaArgs> for OmegaChoice {
    fn from(a: &OmegaArgs) -> Self {
        match (a.omega, a.omega_sweep, a.omega_formula) {
            (Some(w), _, _) => Self::Fixed(w),
            (_, true, _) => Self::Sweep,
            (_, _, true) => Self::Formula,
            _ => Self::Auto,
        }
    }
}

/// Every tunable of every method; echoed verbatim into run metadata.
#[derive(Debug, Clone, Serialize)]
pub struct Params {
    pub epsilon: f64,
    pub sigma: f64,
    pub c: f64,
    pub max_pushes: u64,
    pub omega: OmegaChoice,
    pub walk_len: usize,
    pub num_walks: usize,
    pub samples: usize,
    pub sample_seed: u64,
    pub sync_tol: f64,
}

impl Params {
    pub fn new(push: &PushArgs, omega: &OmegaArgs, sampling: &SamplingArgs, seed: u64) -> Self {
        Self {
            epsilon: push.epsilon,
            sigma: push.sigma,
            c: push.c,
            max_pushes: push.max_pushes,
            omega: omega.into(),
            walk_len: sampling.walk_len,
            num_walks: sampling.num_walks,
            samples: sampling.samples,
            sample_seed: sampling.sample_seed.unwrap_or(seed.wrapping_add(1)),
            sync_tol: DEFAULT_SYNC_TOL,
        }
    }

    fn push_options(&self) -> PushOptions {
        PushOptions {
            max_pushes: self.max_pushes,
        }
    }
}

pub struct Outcome {
    pub result: EstimateResult,
    pub omega: Option<OmegaSelection>,
    /// Sweeps of the synchronous iteration.
    pub iterations: Option<usize>,
}

impl Outcome {
    fn plain(result: EstimateResult) -> Self {
        Self {
            result,
            omega: None,
            iterations: None,
        }
    }
}

pub fn select_omega(graph: &Graph, s: &OpinionVector, p: &Params) -> Result<OmegaSelection> {
    let sweep = |grid: OmegaGrid| {
        omega_sweep_with(graph, s, p.epsilon, p.sigma, p.c, &grid, &p.push_options())
    };
    let grid = if graph.is_directed() {
        OmegaGrid::directed_default()
    } else {
        OmegaGrid::default()
    };
    match p.omega {
        OmegaChoice::Fixed(w) => OmegaSelection::fixed(w),
        OmegaChoice::Formula => omega_opt_dense(graph),
        OmegaChoice::Sweep => sweep(grid),
        OmegaChoice::Auto if graph.is_directed() => sweep(grid),
        OmegaChoice::Auto => OmegaSelection::fixed(DEFAULT_OMEGA),
    }
}

pub fn run(method: Method, graph: &Graph, s: &OpinionVector, p: &Params) -> Result<Outcome> {
    let opts = p.push_options();
    let walk = WalkConfig {
        walk_len: p.walk_len,
        num_walks: p.num_walks,
        seed: p.sample_seed,
    };
    let outcome = match method {
        Method::Exact => {
            let started = Instant::now();
            let z = solve_dense(graph, s)?;
            let mut r = EstimateResult::new(Method::Exact, z);
            r.wall_time = started.elapsed().as_secs_f64();
            Outcome::plain(r)
        }
        Method::Sync => {
            let started = Instant::now();
            let out = iterate_sync(graph, s, p.sync_tol, DEFAULT_SYNC_MAX_ITERS)?;
            let mut r = EstimateResult::new(Method::Sync, out.z);
            r.wall_time = started.elapsed().as_secs_f64();
            Outcome {
                result: r,
                omega: None,
                iterations: Some(out.iterations),
            }
        }
        Method::Bli => Outcome::plain(improved_bli_with(
            graph,
            s,
            p.epsilon,
            p.sigma,
            p.c,
            &opts,
            &mut NoObserver,
        )?),
        Method::BliRaw => Outcome::plain(bound_local_iter_with(
            graph,
            s,
            p.epsilon,
            &opts,
            &mut NoObserver,
        )?),
        Method::Blisor | Method::BlisorRaw => {
            let sel = select_omega(graph, s, p)?;
            let r = if method == Method::Blisor {
                improved_blisor_with(
                    graph,
                    s,
                    p.epsilon,
                    p.sigma,
                    p.c,
                    sel.omega,
                    &opts,
                    &mut NoObserver,
                )?
            } else {
                bound_local_iter_sor_with(graph, s, p.epsilon, sel.omega, &opts, &mut NoObserver)?
            };
            Outcome {
                result: r,
                omega: Some(sel),
                iterations: None,
            }
        }
        Method::Rwb => Outcome::plain(rwb_all(graph, s, &walk)?),
        Method::Forest => Outcome::plain(forest_sample(graph, s, p.samples, p.sample_seed)?),
    };
    Ok(outcome)
}
