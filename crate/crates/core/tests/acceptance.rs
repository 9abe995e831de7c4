//! Acceptance suite.
//!
//! Every criterion runs against an independent oracle (dense LU solve, dense
//! fundamental matrix, closed-form values) at a pinned tolerance and prints
//! one `PASS` / `FAIL` line. The process exits non-zero if any criterion
//! fails. Run with `cargo test -p fj-core --test acceptance`.

use std::time::Instant;

use fj_core::exact::{iterate_sync, solve_dense, DenseOracle, DEFAULT_SYNC_MAX_ITERS};
use fj_core::forest::{forest_sample, root_distribution};
use fj_core::graph::{
    barabasi_albert, complete, erdos_renyi, grid_2d, path, strip_out_arcs, Graph,
};
use fj_core::metrics::MetricsReport;
use fj_core::opinion::{gen_uniform, OpinionVector};
use fj_core::par;
use fj_core::push::{
    bound_local_iter, bound_local_iter_with, improved_bli, improved_bli_with, NoObserver,
    PushObserver, PushOptions, PushState, ResidualInvariant, DEFAULT_C, DEFAULT_SIGMA,
};
use fj_core::sor::{
    bound_local_iter_sor, bound_local_iter_sor_with, improved_blisor, improved_blisor_with,
    omega_opt_dense, omega_sweep, OmegaGrid,
};
use fj_core::walk::{rwb_all, WalkConfig};
use fj_core::Error;
use rand::seq::index::sample;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

/// Slack on every relative-error band.
const BAND_SLACK: f64 = 1e-12;
const INVARIANT_TOL: f64 = 1e-10;
const OMEGA_ONE_TOL: f64 = 1e-14;
const SOR_PUSH_RATIO: f64 = 1.5;
const OMEGA_FORMULA_TOL: f64 = 1e-4;
const FOREST_ABS_TOL: f64 = 0.01;
const FOREST_SIGMAS: f64 = 3.0;
const FOREST_SAMPLES: usize = 100_000;
const DIRECTED_EPS: f64 = 1e-2;
const METRIC_REL_TOL: f64 = 0.03;
const SYNC_TOL: f64 = 1e-12;
const SYNC_AGREEMENT: f64 = 1e-8;
const RWB_ABS_TOL: f64 = 0.01;
const THROUGHPUT_LIMIT_SECS: f64 = 60.0;

type Outcome = Result<String, String>;
type Solve<'a> = Box<dyn Fn(&mut dyn PushObserver) -> Result<u64, Error> + 'a>;
type Criterion = (&'static str, fn() -> Outcome);

struct Instance {
    name: String,
    graph: Graph,
    s: OpinionVector,
}

fn clipped_uniform(n: usize, seed: u64) -> OpinionVector {
    let s = gen_uniform(n, seed).unwrap();
    OpinionVector::new(s.as_slice().iter().map(|v| v.max(0.01)).collect()).unwrap()
}

/// 10 G(500, 0.02) and 10 preferential-attachment (500, 3) graphs with
/// uniform opinions clipped to [0.01, 1].
fn undirected_suite() -> Vec<Instance> {
    let mut out = Vec::new();
    for seed in 0..10u64 {
        out.push(Instance {
            name: format!("er500-{seed}"),
            graph: erdos_renyi(500, 0.02, false, 1000 + seed),
            s: clipped_uniform(500, 2000 + seed),
        });
        out.push(Instance {
            name: format!("ba500-{seed}"),
            graph: barabasi_albert(500, 3, 3000 + seed),
            s: clipped_uniform(500, 4000 + seed),
        });
    }
    out
}

/// 10 directed G(300, 0.02) graphs, 15 nodes of each stripped of out-arcs.
fn directed_suite() -> Vec<Instance> {
    (0..10u64)
        .map(|seed| {
            let base = erdos_renyi(300, 0.02, true, 5000 + seed);
            let mut rng = ChaCha8Rng::seed_from_u64(6000 + seed);
            let dangling = sample(&mut rng, 300, 15).into_vec();
            Instance {
                name: format!("dir300-{seed}"),
                graph: strip_out_arcs(&base, &dangling),
                s: gen_uniform(300, 7000 + seed).unwrap(),
            }
        })
        .collect()
}

/// Worst violation of `lo_factor z - slack <= z_hat <= hi_factor z + slack`
/// over nodes with `z_v > floor`; non-positive means the band holds.
fn band_violation(z_hat: &[f64], z: &[f64], lo_factor: f64, hi_factor: f64, floor: f64) -> f64 {
    z_hat
        .iter()
        .zip(z)
        .filter(|(_, &zv)| zv > floor)
        .map(|(&zh, &zv)| {
            let above = zh - (hi_factor * zv + BAND_SLACK);
            let below = (lo_factor * zv - BAND_SLACK) - zh;
            above.max(below)
        })
        .fold(f64::NEG_INFINITY, f64::max)
}

fn max_rel_err(z_hat: &[f64], z: &[f64], floor: f64) -> f64 {
    z_hat
        .iter()
        .zip(z)
        .filter(|(_, &zv)| zv > floor)
        .map(|(a, b)| (a - b).abs() / b)
        .fold(0.0, f64::max)
}

fn c1_one_sided() -> Outcome {
    let suite = undirected_suite();
    let results = par::map_slice(&suite, |inst| -> Result<f64, String> {
        let z = solve_dense(&inst.graph, &inst.s).map_err(|e| e.to_string())?;
        let mut worst = f64::NEG_INFINITY;
        for eps in [1e-1, 1e-2, 1e-4] {
            let out = bound_local_iter(&inst.graph, &inst.s, eps).map_err(|e| e.to_string())?;
            let v = band_violation(&out.z_hat, &z, 1.0 - eps, 1.0, f64::NEG_INFINITY);
            if v > 0.0 {
                return Err(format!("{} eps={eps}: band violated by {v:e}", inst.name));
            }
            worst = worst.max(v);
        }
        Ok(worst)
    });
    let mut worst = f64::NEG_INFINITY;
    for r in results {
        worst = worst.max(r?);
    }
    Ok(format!("20 graphs x 3 eps, tightest margin {:.3e}", -worst))
}

fn c2_two_sided_sor() -> Outcome {
    let suite = undirected_suite();
    let eps = 1e-2;
    let results = par::map_slice(&suite, |inst| -> Result<(), String> {
        let z = solve_dense(&inst.graph, &inst.s).map_err(|e| e.to_string())?;
        for omega in [1.2, 1.5, 1.8] {
            let out = bound_local_iter_sor(&inst.graph, &inst.s, eps, omega)
                .map_err(|e| e.to_string())?;
            let v = band_violation(&out.z_hat, &z, 1.0 - eps, 1.0 + eps, f64::NEG_INFINITY);
            if v > 0.0 {
                return Err(format!(
                    "{} omega={omega}: band violated by {v:e}",
                    inst.name
                ));
            }
        }
        Ok(())
    });
    results.into_iter().collect::<Result<Vec<_>, _>>()?;
    Ok("20 graphs x omega {1.2, 1.5, 1.8}, eps = 1e-2".into())
}

fn c3_zero_opinions() -> Outcome {
    let eps = 1e-2;
    let mut cases = Vec::new();
    for seed in 0..4u64 {
        cases.push((
            format!("er500-{seed}"),
            erdos_renyi(500, 0.02, false, 1000 + seed),
        ));
        cases.push((
            format!("ba500-{seed}"),
            barabasi_albert(500, 3, 3000 + seed),
        ));
    }
    let results = par::map_slice(&cases, |(name, g)| -> Result<(bool, u64), String> {
        let n = g.num_nodes();
        let mut values = gen_uniform(n, 8000).unwrap().into_inner();
        let mut rng = ChaCha8Rng::seed_from_u64(8100);
        for v in sample(&mut rng, n, n * 3 / 10) {
            values[v] = 0.0;
        }
        let s = OpinionVector::new(values).unwrap();
        let z = solve_dense(g, &s).map_err(|e| e.to_string())?;
        let out = improved_bli(g, &s, eps, DEFAULT_SIGMA, DEFAULT_C).map_err(|e| e.to_string())?;
        let v = band_violation(&out.z_hat, &z, 1.0 - eps, 1.0, DEFAULT_SIGMA);
        if v > 0.0 {
            return Err(format!("{name}: improved band violated by {v:e}"));
        }
        let raw = bound_local_iter_with(
            g,
            &s,
            eps,
            &PushOptions {
                max_pushes: 5_000_000,
            },
            &mut NoObserver,
        );
        match raw {
            Ok(r) => Ok((true, r.pushes)),
            Err(Error::Watchdog { pushes }) => Ok((false, pushes)),
            Err(e) => Err(format!("{name}: raw run failed unexpectedly: {e}")),
        }
    });
    let mut terminated = 0;
    let mut tripped = 0;
    for r in results {
        match r? {
            (true, _) => terminated += 1,
            (false, _) => tripped += 1,
        }
    }
    Ok(format!(
        "8 graphs, 30% zero opinions: improved run terminated with band intact; raw run terminated {terminated}, watchdog {tripped}"
    ))
}

/// Runs `solve` once to count pushes, then again checking the invariant at
/// 12 random push indices.
fn checked_gaps<F>(check: &ResidualInvariant, seed: u64, solve: F) -> Result<(usize, f64), String>
where
    F: Fn(&mut dyn PushObserver) -> Result<u64, Error>,
{
    let total = solve(&mut |_: usize, _: &PushState| {}).map_err(|e| e.to_string())?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let picks = sample(&mut rng, total as usize, 12.min(total as usize));
    let mut at: Vec<u64> = picks.into_iter().map(|i| i as u64 + 1).collect();
    at.sort_unstable();
    let mut worst = 0.0f64;
    let mut count = 0;
    let mut failure = None;
    solve(&mut |_: usize, st: &PushState| {
        if at.binary_search(&st.pushes()).is_ok() {
            match check.gap(st) {
                Ok(g) => {
                    worst = worst.max(g);
                    count += 1;
                }
                Err(e) => failure = Some(e.to_string()),
            }
        }
    })
    .map_err(|e| e.to_string())?;
    if let Some(f) = failure {
        return Err(f);
    }
    Ok((count, worst))
}

fn c4_residual_invariant() -> Outcome {
    // SOR runs at 1.5 on undirected graphs; directed graphs can diverge
    // there, so the directed instance uses 1.2.
    let graphs = [
        ("er300", erdos_renyi(300, 0.02, false, 11), 1.5),
        ("ba300", barabasi_albert(300, 3, 12), 1.5),
        ("dir300", erdos_renyi(300, 0.02, true, 13), 1.2),
    ];
    let eps = 1e-2;
    let opts = PushOptions::default();
    let mut worst = 0.0f64;
    let mut runs = 0;
    for (k, (name, g, omega)) in graphs.iter().enumerate() {
        let omega = *omega;
        let s = clipped_uniform(300, 20 + k as u64);
        let plain = ResidualInvariant::new(g, s.as_slice()).map_err(|e| e.to_string())?;
        let shifted: Vec<f64> = s.as_slice().iter().map(|v| v + DEFAULT_C).collect();
        let shifted_check = ResidualInvariant::new(g, &shifted).map_err(|e| e.to_string())?;

        let solvers: [(&str, &ResidualInvariant, Solve); 4] = [
            (
                "bli",
                &plain,
                Box::new(|obs| bound_local_iter_with(g, &s, eps, &opts, obs).map(|r| r.pushes)),
            ),
            (
                "sor",
                &plain,
                Box::new(|obs| {
                    bound_local_iter_sor_with(g, &s, eps, omega, &opts, obs).map(|r| r.pushes)
                }),
            ),
            (
                "improved-bli",
                &shifted_check,
                Box::new(|obs| {
                    improved_bli_with(g, &s, eps, DEFAULT_SIGMA, DEFAULT_C, &opts, obs)
                        .map(|r| r.pushes)
                }),
            ),
            (
                "improved-sor",
                &shifted_check,
                Box::new(|obs| {
                    improved_blisor_with(g, &s, eps, DEFAULT_SIGMA, DEFAULT_C, omega, &opts, obs)
                        .map(|r| r.pushes)
                }),
            ),
        ];
        for (j, (label, check, solve)) in solvers.into_iter().enumerate() {
            let (count, gap) = checked_gaps(check, 100 + (k * 10 + j) as u64, solve)?;
            if count < 10 {
                return Err(format!(
                    "{name}/{label} omega={omega}: only {count} checkpoints"
                ));
            }
            if gap > INVARIANT_TOL {
                return Err(format!("{name}/{label}: gap {gap:e} > {INVARIANT_TOL:e}"));
            }
            worst = worst.max(gap);
            runs += 1;
        }
    }
    Ok(format!(
        "{runs} runs x 12 checkpoints, worst gap {worst:.3e}"
    ))
}

fn c5_omega_one() -> Outcome {
    let mut worst = 0.0f64;
    for seed in 0..10u64 {
        let g = match seed % 3 {
            0 => erdos_renyi(300, 0.02, false, 200 + seed),
            1 => barabasi_albert(300, 3, 200 + seed),
            _ => erdos_renyi(300, 0.02, true, 200 + seed),
        };
        let s = clipped_uniform(300, 300 + seed);
        let opts = PushOptions::default();
        let (mut pops_a, mut pops_b) = (Vec::new(), Vec::new());
        let a = bound_local_iter_with(&g, &s, 1e-2, &opts, &mut |v: usize, _: &PushState| {
            pops_a.push(v)
        })
        .map_err(|e| e.to_string())?;
        let b =
            bound_local_iter_sor_with(&g, &s, 1e-2, 1.0, &opts, &mut |v: usize, _: &PushState| {
                pops_b.push(v)
            })
            .map_err(|e| e.to_string())?;
        if pops_a != pops_b {
            return Err(format!("instance {seed}: pop sequences differ"));
        }
        let diff = a
            .z_hat
            .iter()
            .zip(&b.z_hat)
            .map(|(x, y)| (x - y).abs())
            .fold(0.0, f64::max);
        if diff > OMEGA_ONE_TOL {
            return Err(format!("instance {seed}: outputs differ by {diff:e}"));
        }
        worst = worst.max(diff);
    }
    Ok(format!(
        "10 instances, identical pop sequences, max difference {worst:e}"
    ))
}

fn c6_sor_acceleration() -> Outcome {
    let g = erdos_renyi(2000, 0.005, false, 77);
    let s = gen_uniform(2000, 78).unwrap();
    let slow =
        improved_blisor(&g, &s, 1e-2, DEFAULT_SIGMA, DEFAULT_C, 1.0).map_err(|e| e.to_string())?;
    let fast =
        improved_blisor(&g, &s, 1e-2, DEFAULT_SIGMA, DEFAULT_C, 1.5).map_err(|e| e.to_string())?;
    let ratio = slow.pushes as f64 / fast.pushes as f64;
    let time_ratio = slow.wall_time / fast.wall_time.max(1e-9);
    let detail = format!(
        "pushes {} (omega 1.0) vs {} (omega 1.5), ratio {ratio:.2} (need >= {SOR_PUSH_RATIO}); wall-time ratio {time_ratio:.2} (informational)",
        slow.pushes, fast.pushes
    );
    if (fast.pushes as f64) <= slow.pushes as f64 / SOR_PUSH_RATIO {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c7_omega_formula() -> Outcome {
    // Closed forms: mu(P2) = 1/2, mu(K3) = 2/3.
    let expect = |mu: f64| 1.0 + (mu / (1.0 + (1.0 - mu * mu).sqrt())).powi(2);
    let p2 = omega_opt_dense(&path(2)).map_err(|e| e.to_string())?;
    let k3 = omega_opt_dense(&complete(3)).map_err(|e| e.to_string())?;
    if (p2.omega - 1.0718).abs() > OMEGA_FORMULA_TOL
        || (p2.omega - expect(0.5)).abs() > OMEGA_FORMULA_TOL
    {
        return Err(format!("P2 omega {}", p2.omega));
    }
    if (k3.omega - 1.1459).abs() > OMEGA_FORMULA_TOL
        || (k3.omega - expect(2.0 / 3.0)).abs() > OMEGA_FORMULA_TOL
    {
        return Err(format!("K3 omega {}", k3.omega));
    }
    let grid = grid_2d(20, 20);
    let sel = omega_opt_dense(&grid).map_err(|e| e.to_string())?;
    let s = gen_uniform(400, 90).unwrap();
    let base = improved_blisor(&grid, &s, 1e-2, DEFAULT_SIGMA, DEFAULT_C, 1.0)
        .map_err(|e| e.to_string())?;
    let tuned = improved_blisor(&grid, &s, 1e-2, DEFAULT_SIGMA, DEFAULT_C, sel.omega)
        .map_err(|e| e.to_string())?;
    let detail = format!(
        "P2 {:.5}, K3 {:.5}; grid 20x20 mu {:.4} omega_opt {:.4}: pushes {} vs {} at omega 1",
        p2.omega,
        k3.omega,
        sel.mu.unwrap_or(f64::NAN),
        sel.omega,
        tuned.pushes,
        base.pushes
    );
    if tuned.pushes <= base.pushes {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c8_forest_unbiased() -> Outcome {
    let arc = Graph::from_arcs(2, [(0, 1)], true).unwrap();
    let s = OpinionVector::new(vec![0.0, 1.0]).unwrap();
    let est = forest_sample(&arc, &s, FOREST_SAMPLES, 31).map_err(|e| e.to_string())?;
    if (est.z_hat[0] - 0.5).abs() > FOREST_ABS_TOL || est.z_hat[1] != 1.0 {
        return Err(format!("arc estimate {:?}", est.z_hat));
    }
    let mut entries = 0;
    let mut worst_sigmas = 0.0f64;
    for (k, n) in [6usize, 8, 10, 12, 15].into_iter().enumerate() {
        let g = erdos_renyi(n, 0.25, true, 400 + k as u64);
        let fundamental = DenseOracle::new(&g)
            .and_then(|o| o.fundamental_matrix())
            .map_err(|e| e.to_string())?;
        let dist =
            root_distribution(&g, FOREST_SAMPLES, 500 + k as u64).map_err(|e| e.to_string())?;
        for i in 0..n {
            for u in 0..n {
                let p = fundamental[(i, u)].clamp(0.0, 1.0);
                let sd = (p * (1.0 - p) / FOREST_SAMPLES as f64).sqrt();
                let dev = (dist[i * n + u] - p).abs();
                if dev > FOREST_SIGMAS * sd + 1e-12 {
                    return Err(format!(
                        "graph n={n}: entry ({i},{u}) frequency {} vs {p:.6}, {:.2} sigma",
                        dist[i * n + u],
                        dev / sd
                    ));
                }
                if sd > 0.0 {
                    worst_sigmas = worst_sigmas.max(dev / sd);
                }
                entries += 1;
            }
        }
    }
    Ok(format!(
        "arc z_hat = ({:.4}, {}); {entries} root-distribution entries within {FOREST_SIGMAS} sigma (max {worst_sigmas:.2})",
        est.z_hat[0], est.z_hat[1]
    ))
}

fn c9_directed() -> Outcome {
    let suite = directed_suite();
    let eps = DIRECTED_EPS;
    let results = par::map_slice(&suite, |inst| -> Result<(usize, usize, f64), String> {
        let z = solve_dense(&inst.graph, &inst.s).map_err(|e| e.to_string())?;
        let dangling = (0..inst.graph.num_nodes())
            .filter(|&v| inst.graph.degree(v) == 0)
            .count();
        let bli = improved_bli(&inst.graph, &inst.s, eps, DEFAULT_SIGMA, DEFAULT_C)
            .map_err(|e| e.to_string())?;
        let v = band_violation(&bli.z_hat, &z, 1.0 - eps, 1.0, DEFAULT_SIGMA);
        if v > 0.0 {
            return Err(format!("{} bli: band violated by {v:e}", inst.name));
        }
        let mut worst = max_rel_err(&bli.z_hat, &z, DEFAULT_SIGMA);

        let swept = omega_sweep(
            &inst.graph,
            &inst.s,
            eps,
            DEFAULT_SIGMA,
            DEFAULT_C,
            &OmegaGrid::directed_default(),
        )
        .map_err(|e| format!("{} sweep: {e}", inst.name))?;
        let mut diverged = 0;
        // Omegas inside the directed range must converge; larger ones may hit
        // the divergence sentinel but must never return an out-of-band answer.
        let omegas = [
            (1.1, true),
            (1.2, true),
            (1.3, true),
            (swept.omega, true),
            (1.5, false),
            (1.8, false),
        ];
        for (omega, must_converge) in omegas {
            match improved_blisor(&inst.graph, &inst.s, eps, DEFAULT_SIGMA, DEFAULT_C, omega) {
                Ok(out) => {
                    let v = band_violation(&out.z_hat, &z, 1.0 - eps, 1.0 + eps, DEFAULT_SIGMA);
                    if v > 0.0 {
                        return Err(format!(
                            "{} omega={omega}: band violated by {v:e}",
                            inst.name
                        ));
                    }
                    worst = worst.max(max_rel_err(&out.z_hat, &z, DEFAULT_SIGMA));
                }
                Err(Error::Divergence { .. }) if !must_converge => diverged += 1,
                Err(e) => return Err(format!("{} omega={omega}: {e}", inst.name)),
            }
        }
        Ok((dangling, diverged, worst))
    });
    let mut dangling = 0;
    let mut diverged = 0;
    let mut worst = 0.0f64;
    for r in results {
        let (d, k, w) = r?;
        dangling += d;
        diverged += k;
        worst = worst.max(w);
    }
    if worst > eps {
        return Err(format!("max relative error {worst:e} > {eps}"));
    }
    Ok(format!(
        "10 directed graphs ({dangling} dangling nodes), omega {{1.1, 1.2, 1.3, swept}} in band, max relative error {worst:.3e}; omega {{1.5, 1.8}}: {diverged}/20 stopped by the divergence sentinel, rest in band"
    ))
}

fn c10_metrics() -> Outcome {
    let suite = undirected_suite();
    let results = par::map_slice(&suite, |inst| -> Result<[f64; 4], String> {
        let z = solve_dense(&inst.graph, &inst.s).map_err(|e| e.to_string())?;
        let s = inst.s.as_slice();
        let truth = MetricsReport::compute(&inst.graph, &z, s)
            .map_err(|e| e.to_string())?
            .as_cdip();
        let mut worst = [0.0f64; 4];
        let runs = [
            improved_bli(&inst.graph, &inst.s, 1e-2, DEFAULT_SIGMA, DEFAULT_C),
            improved_blisor(&inst.graph, &inst.s, 1e-2, DEFAULT_SIGMA, DEFAULT_C, 1.5),
        ];
        for run in runs {
            let run = run.map_err(|e| e.to_string())?;
            let est = MetricsReport::compute(&inst.graph, &run.z_hat, s)
                .map_err(|e| e.to_string())?
                .as_cdip();
            for k in 0..4 {
                worst[k] = worst[k].max((est[k] - truth[k]).abs() / truth[k]);
            }
        }
        Ok(worst)
    });
    let mut worst = [0.0f64; 4];
    for r in results {
        let w = r?;
        for k in 0..4 {
            worst[k] = worst[k].max(w[k]);
        }
    }
    let detail = format!(
        "max relative error C {:.2e} D {:.2e} I {:.2e} P {:.2e} (limit {METRIC_REL_TOL})",
        worst[0], worst[1], worst[2], worst[3]
    );
    if worst.iter().all(|&w| w <= METRIC_REL_TOL) {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn c11_oracles_agree() -> Outcome {
    let mut all = undirected_suite();
    all.extend(directed_suite());
    let results = par::map_slice(&all, |inst| -> Result<f64, String> {
        let z = solve_dense(&inst.graph, &inst.s).map_err(|e| e.to_string())?;
        let sync = iterate_sync(&inst.graph, &inst.s, SYNC_TOL, DEFAULT_SYNC_MAX_ITERS)
            .map_err(|e| e.to_string())?;
        let gap = z
            .iter()
            .zip(&sync.z)
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max);
        if gap > SYNC_AGREEMENT {
            return Err(format!("{}: gap {gap:e}", inst.name));
        }
        Ok(gap)
    });
    let mut worst = 0.0f64;
    for r in results {
        worst = worst.max(r?);
    }
    Ok(format!(
        "{} graphs, worst sup-norm gap {worst:.3e}",
        all.len()
    ))
}

fn c12_rwb() -> Outcome {
    let cases = [
        ("P2", path(2), vec![1.0, 0.0]),
        ("K3", complete(3), vec![1.0, 0.0, 0.25]),
    ];
    let mut notes = Vec::new();
    for (name, g, s) in cases {
        let s = OpinionVector::new(s).unwrap();
        let z = solve_dense(&g, &s).map_err(|e| e.to_string())?;
        let err = |walks| -> Result<f64, String> {
            let cfg = WalkConfig {
                walk_len: 600,
                num_walks: walks,
                seed: 41,
            };
            let out = rwb_all(&g, &s, &cfg).map_err(|e| e.to_string())?;
            Ok(out
                .z_hat
                .iter()
                .zip(&z)
                .map(|(a, b)| (a - b).abs())
                .fold(0.0, f64::max))
        };
        let big = err(100_000)?;
        let default_walks = err(4000)?;
        if big > RWB_ABS_TOL {
            return Err(format!("{name}: max abs error {big} with 1e5 walks"));
        }
        notes.push(format!(
            "{name} {big:.4} (1e5 walks), {default_walks:.4} (4000 walks, informational)"
        ));
    }
    Ok(notes.join("; "))
}

fn c13_throughput() -> Outcome {
    let n = 200_000;
    let p = 2.0 * 1e6 / (n as f64 * (n as f64 - 1.0));
    let g = erdos_renyi(n, p, false, 99);
    let s = gen_uniform(n, 100).unwrap();
    let started = Instant::now();
    let out = improved_bli(&g, &s, 1e-2, DEFAULT_SIGMA, DEFAULT_C).map_err(|e| e.to_string())?;
    let secs = started.elapsed().as_secs_f64();
    let detail = format!(
        "n = {n}, m = {}, {} pushes in {secs:.2} s (limit {THROUGHPUT_LIMIT_SECS} s)",
        g.num_edges(),
        out.pushes
    );
    if g.num_edges() >= 990_000 && secs < THROUGHPUT_LIMIT_SECS {
        Ok(detail)
    } else {
        Err(detail)
    }
}

fn main() {
    let criteria: [Criterion; 13] = [
        ("C1  one-sided BLI band", c1_one_sided),
        ("C2  two-sided SOR band", c2_two_sided_sor),
        ("C3  zero opinions / shifted BLI", c3_zero_opinions),
        ("C4  residual invariant", c4_residual_invariant),
        ("C5  omega = 1 reduces to BLI", c5_omega_one),
        ("C6  SOR push reduction", c6_sor_acceleration),
        ("C7  optimal omega formula", c7_omega_formula),
        ("C8  forest sampling unbiased", c8_forest_unbiased),
        ("C9  directed graphs", c9_directed),
        ("C10 metric accuracy", c10_metrics),
        ("C11 dense vs synchronous oracle", c11_oracles_agree),
        ("C12 random-walk baseline", c12_rwb),
        ("C13 throughput (1e6 edges)", c13_throughput),
    ];
    let mut failed = 0;
    for (name, run) in criteria {
        let started = Instant::now();
        let outcome = run();
        let secs = started.elapsed().as_secs_f64();
        match outcome {
            Ok(detail) => println!("PASS  {name:<34} [{secs:6.2}s] {detail}"),
            Err(detail) => {
                failed += 1;
                println!("FAIL  {name:<34} [{secs:6.2}s] {detail}");
            }
        }
    }
    if failed > 0 {
        println!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
    println!("all 13 acceptance criteria passed");
}
