//! Over-relaxed local iteration and the choice of the relaxation factor.
//!
//! Each push credits `omega r_v / (1 + d_v)` to `z_hat_v` and to the residual
//! of every listener of `v`, then leaves `(1 - omega) r_v` behind at `v`. For
//! `omega > 1` residuals change sign, so thresholds compare `|r|`. With
//! `omega = 1` the pop sequence and output coincide exactly with
//! [`bound_local_iter`](crate::push::bound_local_iter).

use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::exact::DEFAULT_DENSE_CAP;
use crate::graph::Graph;
use crate::opinion::OpinionVector;
use crate::par;
use crate::push::{
    check_epsilon, check_shift, shifted_epsilon, shifted_seed, NoObserver, PushObserver,
    PushOptions, PushState,
};
use crate::result::{EstimateResult, Method};

pub const DEFAULT_OMEGA: f64 = 1.5;
/// Residual magnitude, relative to `max s`, treated as divergence.
pub const DIVERGENCE_FACTOR: f64 = 1e6;

fn check_omega(omega: f64) -> Result<()> {
    if omega > 0.0 && omega < 2.0 {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!(
            "omega must lie in (0, 2), got {omega}"
        )))
    }
}

pub(crate) fn run_sor<O: PushObserver + ?Sized>(
    graph: &Graph,
    state: &mut PushState,
    omega: f64,
    limit: f64,
    opts: &PushOptions,
    observer: &mut O,
) -> Result<()> {
    let diverged = |residual: f64| Error::Divergence {
        omega,
        residual,
        limit,
    };
    while let Some(v) = state.queue.pop_front() {
        state.in_queue[v] = false;
        if state.pushes >= opts.max_pushes {
            return Err(Error::Watchdog {
                pushes: state.pushes,
            });
        }
        let rv = state.residual[v];
        // (omega * r) / (1 + d) keeps omega = 1 bit-identical to plain BLI.
        let share = omega * rv / (1.0 + graph.degree(v) as f64);
        state.z_hat[v] += share;
        let listeners = graph.in_neighbors(v);
        for &u in listeners {
            state.residual[u] += share;
            let mag = state.residual[u].abs();
            if mag.is_nan() || mag > limit {
                return Err(diverged(mag));
            }
            state.enqueue_if(u, mag > state.threshold[u]);
        }
        let left = (1.0 - omega) * rv;
        state.residual[v] = left;
        state.pushes += 1;
        state.touched_arcs += listeners.len() as u64;
        state.enqueue_if(v, left.abs() > state.threshold[v]);
        observer.after_push(v, state);
    }
    Ok(())
}

fn divergence_limit(seed: &[f64]) -> f64 {
    DIVERGENCE_FACTOR * seed.iter().fold(0.0f64, |m, v| m.max(v.abs()))
}

/// Over-relaxed bounded local iteration on `s` with thresholds `epsilon s`.
///
/// On return `(1 - epsilon) z_v <= z_hat_v <= (1 + epsilon) z_v`.
pub fn bound_local_iter_sor(
    graph: &Graph,
    s: &OpinionVector,
    epsilon: f64,
    omega: f64,
) -> Result<EstimateResult> {
    bound_local_iter_sor_with(
        graph,
        s,
        epsilon,
        omega,
        &PushOptions::default(),
        &mut NoObserver,
    )
}

pub fn bound_local_iter_sor_with<O: PushObserver + ?Sized>(
    graph: &Graph,
    s: &OpinionVector,
    epsilon: f64,
    omega: f64,
    opts: &PushOptions,
    observer: &mut O,
) -> Result<EstimateResult> {
    s.check_len(graph.num_nodes())?;
    check_epsilon(epsilon)?;
    check_omega(omega)?;
    let started = Instant::now();
    let seed = s.as_slice().to_vec();
    let threshold = seed.iter().map(|&v| epsilon * v).collect();
    let limit = divergence_limit(&seed);
    let mut state = PushState::new(seed, threshold);
    run_sor(graph, &mut state, omega, limit, opts, observer)?;
    let mut out = EstimateResult::new(Method::BlisorRaw, state.z_hat);
    out.epsilon = Some(epsilon);
    out.omega = Some(omega);
    out.pushes = state.pushes;
    out.touched_arcs = state.touched_arcs;
    out.wall_time = started.elapsed().as_secs_f64();
    Ok(out)
}

/// Over-relaxed iteration on `s + c` with tolerance
/// `sigma epsilon / (c + sigma)`, minus `c`. The two-sided relative bound
/// holds for nodes with `z_v > sigma`.
pub fn improved_blisor(
    graph: &Graph,
    s: &OpinionVector,
    epsilon: f64,
    sigma: f64,
    c: f64,
    omega: f64,
) -> Result<EstimateResult> {
    improved_blisor_with(
        graph,
        s,
        epsilon,
        sigma,
        c,
        omega,
        &PushOptions::default(),
        &mut NoObserver,
    )
}

#[allow(clippy::too_many_arguments)]
pub fn improved_blisor_with<O: PushObserver + ?Sized>(
    graph: &Graph,
    s: &OpinionVector,
    epsilon: f64,
    sigma: f64,
    c: f64,
    omega: f64,
    opts: &PushOptions,
    observer: &mut O,
) -> Result<EstimateResult> {
    s.check_len(graph.num_nodes())?;
    check_epsilon(epsilon)?;
    check_shift(sigma, c)?;
    check_omega(omega)?;
    let started = Instant::now();
    let (seed, threshold) = shifted_seed(s, shifted_epsilon(epsilon, sigma, c), c);
    let limit = divergence_limit(&seed);
    let mut state = PushState::new(seed, threshold);
    run_sor(graph, &mut state, omega, limit, opts, observer)?;
    let z_hat = state.z_hat.iter().map(|z| z - c).collect();
    let mut out = EstimateResult::new(Method::Blisor, z_hat);
    out.epsilon = Some(epsilon);
    out.sigma = Some(sigma);
    out.c = Some(c);
    out.omega = Some(omega);
    out.pushes = state.pushes;
    out.touched_arcs = state.touched_arcs;
    out.wall_time = started.elapsed().as_secs_f64();
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OmegaSource {
    Fixed,
    Formula,
    Sweep,
}

/// Cost of one grid point; `pushes == None` marks divergence or watchdog.
#[derive(Debug, Clone, Serialize)]
pub struct SweepPoint {
    pub omega: f64,
    pub pushes: Option<u64>,
    pub touched_arcs: Option<u64>,
    pub wall_time: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct OmegaSelection {
    pub omega: f64,
    pub source: OmegaSource,
    /// Spectral radius of `(I + D)^{-1} A` when the formula was used.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mu: Option<f64>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub sweep_table: Vec<SweepPoint>,
}

impl OmegaSelection {
    pub fn fixed(omega: f64) -> Result<Self> {
        check_omega(omega)?;
        Ok(Self {
            omega,
            source: OmegaSource::Fixed,
            mu: None,
            sweep_table: Vec::new(),
        })
    }
}

/// `1 + (mu / (1 + sqrt(1 - mu^2)))^2`.
pub fn omega_from_mu(mu: f64) -> f64 {
    let t = mu / (1.0 + (1.0 - mu * mu).sqrt());
    1.0 + t * t
}

/// Spectral radius of `(I + D)^{-1} A` for an undirected graph, by power
/// iteration on the similar symmetric matrix `(I + D)^{-1/2} A (I + D)^{-1/2}`.
///
/// Stops once the extrapolated error (last change scaled by the observed
/// contraction rate) drops below `tol`.
pub fn spectral_radius(graph: &Graph, tol: f64, max_iters: usize) -> Result<f64> {
    if graph.is_directed() {
        return Err(Error::DirectedUnsupported("the spectral radius routine"));
    }
    let n = graph.num_nodes();
    let scale: Vec<f64> = (0..n)
        .map(|i| 1.0 / (1.0 + graph.degree(i) as f64).sqrt())
        .collect();
    let apply = |x: &[f64], y: &mut [f64]| {
        for (i, yi) in y.iter_mut().enumerate() {
            let acc: f64 = graph
                .out_neighbors(i)
                .iter()
                .map(|&j| scale[j] * x[j])
                .sum();
            *yi = scale[i] * acc;
        }
    };
    let norm = |x: &[f64]| x.iter().map(|v| v * v).sum::<f64>().sqrt();

    let mut x: Vec<f64> = scale.iter().map(|s| 1.0 / s).collect();
    let x_norm = norm(&x);
    x.iter_mut().for_each(|v| *v /= x_norm);
    let mut y = vec![0.0; n];
    let mut estimate = 0.0;
    let mut last_change = f64::INFINITY;
    for _ in 0..max_iters {
        apply(&x, &mut y);
        let next = norm(&y);
        if next == 0.0 {
            return Ok(0.0);
        }
        let change = (next - estimate).abs();
        if change == 0.0 {
            return Ok(next);
        }
        if last_change.is_finite() {
            let rate = (change / last_change).min(1.0 - 1e-12);
            if change * rate / (1.0 - rate) <= tol {
                return Ok(next);
            }
        }
        estimate = next;
        last_change = change;
        for (xi, yi) in x.iter_mut().zip(&y) {
            *xi = yi / next;
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iters,
        last_delta: last_change,
    })
}

/// Optimal relaxation factor from the spectral radius of the Jacobi matrix.
/// Undirected graphs only.
pub fn omega_opt_dense(graph: &Graph) -> Result<OmegaSelection> {
    omega_opt_dense_with_cap(graph, DEFAULT_DENSE_CAP)
}

pub fn omega_opt_dense_with_cap(graph: &Graph, cap: usize) -> Result<OmegaSelection> {
    if graph.is_directed() {
        return Err(Error::DirectedUnsupported(
            "the optimal-omega formula (use the omega sweep)",
        ));
    }
    if graph.num_nodes() > cap {
        return Err(Error::DenseCapExceeded {
            n: graph.num_nodes(),
            cap,
        });
    }
    let mu = spectral_radius(graph, 1e-10, 10_000_000)?;
    Ok(OmegaSelection {
        omega: omega_from_mu(mu),
        source: OmegaSource::Formula,
        mu: Some(mu),
        sweep_table: Vec::new(),
    })
}

/// Evenly spaced relaxation factors `start, start + step, ..., <= end`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct OmegaGrid {
    pub start: f64,
    pub end: f64,
    pub step: f64,
}

impl Default for OmegaGrid {
    fn default() -> Self {
        Self {
            start: 1.0,
            end: 1.95,
            step: 0.05,
        }
    }
}

impl OmegaGrid {
    /// Coarser grid used for directed graphs.
    pub fn directed_default() -> Self {
        Self {
            start: 1.0,
            end: 1.9,
            step: 0.1,
        }
    }

    pub fn single(omega: f64) -> Self {
        Self {
            start: omega,
            end: omega,
            step: 1.0,
        }
    }

    pub fn points(&self) -> Result<Vec<f64>> {
        if self.step.is_nan() || self.step <= 0.0 || self.end < self.start {
            return Err(Error::InvalidParameter(format!("bad omega grid {self:?}")));
        }
        let count = ((self.end - self.start) / self.step + 1e-9).floor() as usize + 1;
        let points: Vec<f64> = (0..count)
            .map(|i| {
                let w = self.start + i as f64 * self.step;
                (w * 1e9).round() / 1e9
            })
            .collect();
        for &w in &points {
            check_omega(w)?;
        }
        Ok(points)
    }
}

/// Runs [`improved_blisor`] at every grid point and keeps the factor with
/// the fewest pushes, ties going to the smaller factor. Grid points are
/// evaluated in parallel.
pub fn omega_sweep(
    graph: &Graph,
    s: &OpinionVector,
    epsilon: f64,
    sigma: f64,
    c: f64,
    grid: &OmegaGrid,
) -> Result<OmegaSelection> {
    omega_sweep_with(graph, s, epsilon, sigma, c, grid, &PushOptions::default())
}

pub fn omega_sweep_with(
    graph: &Graph,
    s: &OpinionVector,
    epsilon: f64,
    sigma: f64,
    c: f64,
    grid: &OmegaGrid,
    opts: &PushOptions,
) -> Result<OmegaSelection> {
    s.check_len(graph.num_nodes())?;
    check_epsilon(epsilon)?;
    check_shift(sigma, c)?;
    let points = grid.points()?;
    let table = par::map_slice(&points, |&omega| {
        let started = Instant::now();
        match improved_blisor_with(graph, s, epsilon, sigma, c, omega, opts, &mut NoObserver) {
            Ok(run) => Ok(SweepPoint {
                omega,
                pushes: Some(run.pushes),
                touched_arcs: Some(run.touched_arcs),
                wall_time: run.wall_time,
            }),
            Err(e) if e.is_numerical() => Ok(SweepPoint {
                omega,
                pushes: None,
                touched_arcs: None,
                wall_time: started.elapsed().as_secs_f64(),
            }),
            Err(e) => Err(e),
        }
    })
    .into_iter()
    .collect::<Result<Vec<_>>>()?;

    let best = table
        .iter()
        .filter_map(|p| p.pushes.map(|k| (k, p.omega)))
        .fold(None, |best: Option<(u64, f64)>, (k, w)| match best {
            Some((bk, bw)) if bk < k || (bk == k && bw <= w) => Some((bk, bw)),
            _ => Some((k, w)),
        })
        .ok_or(Error::SweepFailed)?;
    Ok(OmegaSelection {
        omega: best.1,
        source: OmegaSource::Sweep,
        mu: None,
        sweep_table: table,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exact::solve_dense;
    use crate::graph::{complete, erdos_renyi, grid_2d, path};
    use crate::opinion::gen_uniform;
    use crate::push::{bound_local_iter_with, ResidualInvariant};
    use approx::assert_abs_diff_eq;
    use nalgebra::DMatrix;

    fn ov(v: &[f64]) -> OpinionVector {
        OpinionVector::new(v.to_vec()).unwrap()
    }

    fn clipped_uniform(n: usize, seed: u64) -> OpinionVector {
        let s = gen_uniform(n, seed).unwrap();
        OpinionVector::new(s.as_slice().iter().map(|v| v.max(0.01)).collect()).unwrap()
    }

    fn assert_two_sided(z_hat: &[f64], z: &[f64], eps: f64) {
        for (v, (&zh, &zv)) in z_hat.iter().zip(z).enumerate() {
            assert!(zh <= (1.0 + eps) * zv + 1e-12, "node {v}: {zh} vs {zv}");
            assert!(zh >= (1.0 - eps) * zv - 1e-12, "node {v}: {zh} vs {zv}");
        }
    }

    /// Dense eigenvalue oracle for mu.
    fn dense_mu(g: &Graph) -> f64 {
        let n = g.num_nodes();
        let mut m = DMatrix::zeros(n, n);
        for i in 0..n {
            for &j in g.out_neighbors(i) {
                m[(i, j)] =
                    1.0 / ((1.0 + g.degree(i) as f64).sqrt() * (1.0 + g.degree(j) as f64).sqrt());
            }
        }
        m.symmetric_eigen()
            .eigenvalues
            .iter()
            .fold(0.0f64, |a, e| a.max(e.abs()))
    }

    #[test]
    fn omega_one_matches_bli() {
        let g = erdos_renyi(200, 0.03, false, 21);
        let s = clipped_uniform(200, 21);
        let mut pops_a = Vec::new();
        let mut pops_b = Vec::new();
        let a = bound_local_iter_with(
            &g,
            &s,
            0.01,
            &PushOptions::default(),
            &mut |v: usize, _: &PushState| pops_a.push(v),
        )
        .unwrap();
        let b = bound_local_iter_sor_with(
            &g,
            &s,
            0.01,
            1.0,
            &PushOptions::default(),
            &mut |v: usize, _: &PushState| pops_b.push(v),
        )
        .unwrap();
        assert_eq!(pops_a, pops_b);
        assert_eq!(a.z_hat, b.z_hat);
    }

    #[test]
    fn p2_two_sided() {
        let out = bound_local_iter_sor(&path(2), &ov(&[1.0, 0.5]), 0.01, 1.5).unwrap();
        assert_two_sided(&out.z_hat, &[5.0 / 6.0, 2.0 / 3.0], 0.01);
    }

    #[test]
    fn over_relaxation_saves_pushes() {
        let g = erdos_renyi(300, 0.02, false, 4);
        let s = gen_uniform(300, 4).unwrap();
        let slow = bound_local_iter_sor(&g, &s, 0.01, 1.0).unwrap();
        let fast = bound_local_iter_sor(&g, &s, 0.01, 1.5).unwrap();
        assert!(
            fast.pushes < slow.pushes,
            "{} vs {}",
            fast.pushes,
            slow.pushes
        );
    }

    #[test]
    fn improved_cases() {
        let (eps, sigma, c) = (0.01, 1e-5, 1e-5);
        let zero = OpinionVector::constant(50, 0.0).unwrap();
        let g = erdos_renyi(50, 0.1, false, 2);
        let out = improved_blisor(&g, &zero, eps, sigma, c, 1.5).unwrap();
        let bound = shifted_epsilon(eps, sigma, c) * c;
        assert!(out.z_hat.iter().all(|z| z.abs() <= bound + 1e-18));

        let out = improved_blisor(&path(2), &ov(&[1.0, 0.0]), eps, sigma, c, 1.5).unwrap();
        assert_two_sided(&out.z_hat, &[2.0 / 3.0, 1.0 / 3.0], eps);

        let arc = Graph::from_arcs(2, [(0, 1)], true).unwrap();
        let out = improved_blisor(&arc, &ov(&[0.0, 1.0]), eps, sigma, c, 1.2).unwrap();
        assert_two_sided(&out.z_hat, &[0.5, 1.0], eps);
    }

    #[test]
    fn bands_on_random_graphs() {
        for seed in 0..3 {
            let g = erdos_renyi(300, 0.03, false, seed);
            let s = clipped_uniform(300, seed);
            let z = solve_dense(&g, &s).unwrap();
            for omega in [1.2, 1.5, 1.8] {
                let out = bound_local_iter_sor(&g, &s, 0.01, omega).unwrap();
                assert_two_sided(&out.z_hat, &z, 0.01);
            }
        }
    }

    #[test]
    fn invariant_holds_with_over_relaxation() {
        let g = erdos_renyi(120, 0.05, false, 7);
        let s = clipped_uniform(120, 7);
        let check = ResidualInvariant::new(&g, s.as_slice()).unwrap();
        let mut worst = 0.0f64;
        let mut cert = 0.0;
        bound_local_iter_sor_with(
            &g,
            &s,
            0.01,
            1.5,
            &PushOptions::default(),
            &mut |_: usize, st: &PushState| {
                if st.pushes().is_multiple_of(37) {
                    worst = worst.max(check.gap(st).unwrap());
                }
                cert = st.certificate();
            },
        )
        .unwrap();
        assert!(worst <= 1e-10, "gap {worst}");
        assert!(cert <= 0.0);
    }

    #[test]
    fn validation() {
        let g = path(2);
        let s = ov(&[1.0, 0.5]);
        assert!(bound_local_iter_sor(&g, &s, 0.1, 0.0).is_err());
        assert!(bound_local_iter_sor(&g, &s, 0.1, 2.0).is_err());
        assert!(OmegaSelection::fixed(2.5).is_err());
        assert!(OmegaGrid {
            start: 1.0,
            end: 2.0,
            step: 0.5
        }
        .points()
        .is_err());
    }

    #[test]
    fn formula_values() {
        let p2 = omega_opt_dense(&path(2)).unwrap();
        assert_abs_diff_eq!(p2.mu.unwrap(), 0.5, epsilon = 1e-10);
        assert_abs_diff_eq!(p2.omega, 1.0718, epsilon = 1e-4);

        let k3 = omega_opt_dense(&complete(3)).unwrap();
        assert_abs_diff_eq!(k3.mu.unwrap(), 2.0 / 3.0, epsilon = 1e-10);
        assert_abs_diff_eq!(k3.omega, 1.1459, epsilon = 1e-4);

        let empty = Graph::from_arcs(4, [], false).unwrap();
        let sel = omega_opt_dense(&empty).unwrap();
        assert_eq!((sel.mu.unwrap(), sel.omega), (0.0, 1.0));

        let arc = Graph::from_arcs(2, [(0, 1)], true).unwrap();
        assert!(matches!(
            omega_opt_dense(&arc),
            Err(Error::DirectedUnsupported(_))
        ));
        assert!(matches!(
            omega_opt_dense_with_cap(&path(10), 5),
            Err(Error::DenseCapExceeded { .. })
        ));
    }

    #[test]
    fn power_iteration_matches_eigensolver() {
        for g in [
            grid_2d(12, 12),
            erdos_renyi(150, 0.05, false, 3),
            path(9),
            complete(7),
        ] {
            let mu = spectral_radius(&g, 1e-10, 10_000_000).unwrap();
            assert_abs_diff_eq!(mu, dense_mu(&g), epsilon = 1e-8);
        }
    }

    #[test]
    fn formula_monotone() {
        let mut prev = omega_from_mu(0.0);
        for i in 1..100 {
            let w = omega_from_mu(i as f64 / 100.0);
            assert!(w > prev);
            assert!(w < 2.0);
            prev = w;
        }
    }

    #[test]
    fn grid_points() {
        assert_eq!(OmegaGrid::default().points().unwrap().len(), 20);
        assert_eq!(OmegaGrid::single(1.0).points().unwrap(), vec![1.0]);
        let pts = OmegaGrid::default().points().unwrap();
        assert_eq!(pts[10], 1.5);
        assert_eq!(*pts.last().unwrap(), 1.95);
    }

    #[test]
    fn sweep_argmin() {
        let g = erdos_renyi(300, 0.02, false, 4);
        let s = gen_uniform(300, 4).unwrap();
        let sel = omega_sweep(&g, &s, 0.01, 1e-5, 1e-5, &OmegaGrid::default()).unwrap();
        assert_eq!(sel.sweep_table.len(), 20);
        let best = sel
            .sweep_table
            .iter()
            .filter_map(|p| p.pushes)
            .min()
            .unwrap();
        let first = sel
            .sweep_table
            .iter()
            .find(|p| p.pushes == Some(best))
            .unwrap();
        assert_eq!(sel.omega, first.omega);
        assert!((1.0..2.0).contains(&sel.omega));

        let single = omega_sweep(&g, &s, 0.01, 1e-5, 1e-5, &OmegaGrid::single(1.0)).unwrap();
        assert_eq!(single.omega, 1.0);
        assert_eq!(single.sweep_table.len(), 1);
    }
}
