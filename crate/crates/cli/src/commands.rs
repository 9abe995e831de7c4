use std::io::Write;
use std::path::Path;
use std::time::Instant;

use anyhow::{anyhow, bail, Context, Result};
use fj_core::exact::{iterate_sync, solve_dense, DEFAULT_SYNC_MAX_ITERS};
use fj_core::metrics::{total_stress, MetricsReport, Stress};
use fj_core::opinion::{fmt_real, read_vector, write_vector, OpinionDistribution, RNG_NAME};
use fj_core::push::PushOptions;
use fj_core::sor::{omega_sweep_with, OmegaGrid};
use fj_core::{par, Error, Graph, Method, OpinionVector};
use serde::Serialize;

use crate::cli::{
    BenchArgs, CompareArgs, Format, GenArgs, MetricsArgs, OmegaArgs, Reference, SolveArgs,
    SweepArgs,
};
use crate::input::{load_graph, load_opinion_vector, open, read_graph, GraphInfo, LoadedGraph};
use crate::record::{emit, output, sidecar, write_json, Counters, RunRecord, VERSION};
use crate::run::{run, Outcome, Params};

const NA: &str = "NA";

fn counters(out: &Outcome) -> Counters {
    Counters {
        pushes: out.result.pushes,
        touched_arcs: out.result.touched_arcs,
        walks: out.result.walks,
        samples: out.result.samples,
        iterations: out.iterations,
    }
}

fn csv_writer(path: Option<&Path>) -> Result<csv::Writer<Box<dyn Write>>> {
    Ok(csv::Writer::from_writer(output(path)?))
}

pub fn solve(a: &SolveArgs) -> Result<()> {
    let g = load_graph(&a.graph)?;
    let (s, source) = load_opinion_vector(&a.opinions, g.graph.num_nodes())?;
    let params = Params::new(&a.push, &a.omega, &a.sampling, a.opinions.dist.seed);

    let started = Instant::now();
    let outcome = run(a.method, &g.graph, &s, &params)?;
    let wall_time = started.elapsed().as_secs_f64();

    let mut w = output(a.out.as_deref())?;
    write_vector(&outcome.result.z_hat, &mut w)?;
    w.flush()?;

    let mut record = RunRecord::new("solve", g.info(), source);
    record.method = Some(a.method);
    record.counters = Some(counters(&outcome));
    record.omega = outcome.omega;
    record.parameters = Some(params);
    record.wall_time = wall_time;
    emit(&mut record, a.out.as_deref())
}

/// `|est - truth| / truth`, with 0/0 taken as 0.
fn rel_err(est: f64, truth: f64) -> f64 {
    let diff = (est - truth).abs();
    if diff == 0.0 {
        0.0
    } else {
        diff / truth.abs()
    }
}

/// Largest relative error over nodes whose reference value exceeds `floor`.
fn max_rel_err(z_hat: &[f64], z: &[f64], floor: f64) -> f64 {
    z_hat
        .iter()
        .zip(z)
        .filter(|(_, &zv)| zv > floor)
        .map(|(&a, &b)| rel_err(a, b))
        .fold(0.0, f64::max)
}

fn reference_solution(
    g: &Graph,
    s: &OpinionVector,
    reference: Reference,
    tol: f64,
) -> Result<Vec<f64>> {
    match reference {
        Reference::Exact => solve_dense(g, s).map_err(|e| match e {
            Error::DenseCapExceeded { .. } => {
                anyhow!(e).context("exact reference infeasible; retry with --reference sync")
            }
            e => anyhow!(e),
        }),
        Reference::Sync => Ok(iterate_sync(g, s, tol, DEFAULT_SYNC_MAX_ITERS)?.z),
    }
}

pub fn compare(a: &CompareArgs) -> Result<()> {
    let g = load_graph(&a.graph)?;
    let (s, source) = load_opinion_vector(&a.opinions, g.graph.num_nodes())?;
    let params = Params::new(&a.push, &a.omega, &a.sampling, a.opinions.dist.seed);
    let z = reference_solution(&g.graph, &s, a.reference, params.sync_tol)?;
    let truth = MetricsReport::compute(&g.graph, &z, s.as_slice())?.as_cdip();

    let mut csv = csv_writer(a.out.as_deref())?;
    csv.write_record([
        "method",
        "max_rel_err_z",
        "rel_err_C",
        "rel_err_D",
        "rel_err_I",
        "rel_err_P",
        "wall_time",
    ])?;
    for &method in &a.methods {
        let started = Instant::now();
        let row = match run(method, &g.graph, &s, &params) {
            Ok(out) => {
                let secs = started.elapsed().as_secs_f64();
                let est =
                    MetricsReport::compute(&g.graph, &out.result.z_hat, s.as_slice())?.as_cdip();
                let mut row = vec![
                    method.to_string(),
                    fmt_real(max_rel_err(&out.result.z_hat, &z, params.sigma)),
                ];
                row.extend(
                    est.iter()
                        .zip(&truth)
                        .map(|(&e, &t)| fmt_real(rel_err(e, t))),
                );
                row.push(fmt_real(secs));
                row
            }
            Err(e) => {
                eprintln!("{method}: {e}");
                let mut row = vec![method.to_string()];
                row.extend(std::iter::repeat_n(NA.to_string(), 6));
                row
            }
        };
        csv.write_record(&row)?;
    }
    csv.flush()?;

    if let Some(out) = &a.out {
        let mut record = RunRecord::new("compare", g.info(), source);
        record.parameters = Some(params);
        emit(&mut record, Some(out))?;
    }
    Ok(())
}

#[derive(Serialize)]
struct BenchRecord<'a> {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    graphs: Vec<GraphInfo>,
    methods: &'a [Method],
    distributions: Vec<OpinionDistribution>,
    seed: u64,
    rng: &'static str,
    reps: usize,
    workers: usize,
    parameters: Params,
    outputs: Vec<String>,
}

struct Cell {
    graph: usize,
    method: Method,
    dist: usize,
}

fn median(mut v: Vec<f64>) -> f64 {
    v.sort_by(f64::total_cmp);
    let k = v.len() / 2;
    if v.len() % 2 == 1 {
        v[k]
    } else {
        0.5 * (v[k - 1] + v[k])
    }
}

pub fn bench(a: &BenchArgs) -> Result<()> {
    if a.reps == 0 {
        bail!(Error::InvalidParameter("--reps must be at least 1".into()));
    }
    let graphs = a
        .graphs
        .iter()
        .map(|p| read_graph(p, a.directed))
        .collect::<Result<Vec<LoadedGraph>>>()?;
    let dists: Vec<OpinionDistribution> = a.dists.iter().map(|&d| a.dist.distribution(d)).collect();
    let opinions = graphs
        .iter()
        .map(|g| {
            dists
                .iter()
                .map(|d| d.generate(g.graph.num_nodes(), a.dist.seed))
                .collect()
        })
        .collect::<fj_core::Result<Vec<Vec<OpinionVector>>>>()?;
    let params = Params::new(&a.push, &a.omega, &a.sampling, a.dist.seed);

    let mut cells = Vec::new();
    for graph in 0..graphs.len() {
        for &method in &a.methods {
            for dist in 0..dists.len() {
                cells.push(Cell {
                    graph,
                    method,
                    dist,
                });
            }
        }
    }
    let rows = par::map_slice(&cells, |cell| {
        let g = &graphs[cell.graph].graph;
        let s = &opinions[cell.graph][cell.dist];
        let mut times = Vec::with_capacity(a.reps);
        let mut pushes = 0;
        for _ in 0..a.reps {
            let started = Instant::now();
            pushes = run(cell.method, g, s, &params)?.result.pushes;
            times.push(started.elapsed().as_secs_f64());
        }
        Ok::<_, fj_core::Error>((median(times), pushes))
    });

    let mut csv = csv_writer(a.out.as_deref())?;
    csv.write_record([
        "graph",
        "n",
        "m",
        "d_max",
        "method",
        "distribution",
        "wall_time",
        "pushes",
    ])?;
    for (cell, row) in cells.iter().zip(rows) {
        let g = &graphs[cell.graph];
        let (time, pushes) = match row {
            Ok((t, p)) => (fmt_real(t), p.to_string()),
            Err(e) => {
                eprintln!(
                    "{} / {} / {}: {e}",
                    g.path.display(),
                    cell.method,
                    dists[cell.dist].short_name()
                );
                (NA.to_string(), NA.to_string())
            }
        };
        csv.write_record([
            g.path.display().to_string(),
            g.graph.num_nodes().to_string(),
            g.graph.num_edges().to_string(),
            g.graph.max_degree().to_string(),
            cell.method.to_string(),
            dists[cell.dist].short_name().to_string(),
            time,
            pushes,
        ])?;
    }
    csv.flush()?;

    if let Some(out) = &a.out {
        let meta = sidecar(out);
        let record = BenchRecord {
            tool: "fjop",
            version: VERSION,
            command: "bench",
            graphs: graphs.iter().map(LoadedGraph::info).collect(),
            methods: &a.methods,
            distributions: dists,
            seed: a.dist.seed,
            rng: RNG_NAME,
            reps: a.reps,
            workers: par::current_workers(),
            parameters: params,
            outputs: vec![out.display().to_string(), meta.display().to_string()],
        };
        write_json(&record, &meta)?;
    }
    Ok(())
}

pub fn sweep_omega(a: &SweepArgs) -> Result<()> {
    let g = load_graph(&a.graph)?;
    let (s, source) = load_opinion_vector(&a.opinions, g.graph.num_nodes())?;
    let base = if g.graph.is_directed() {
        OmegaGrid::directed_default()
    } else {
        OmegaGrid::default()
    };
    let grid = OmegaGrid {
        start: a.omega_start.unwrap_or(base.start),
        end: a.omega_end.unwrap_or(base.end),
        step: a.omega_step.unwrap_or(base.step),
    };
    let opts = PushOptions {
        max_pushes: a.push.max_pushes,
    };

    let started = Instant::now();
    let sel = omega_sweep_with(
        &g.graph,
        &s,
        a.push.epsilon,
        a.push.sigma,
        a.push.c,
        &grid,
        &opts,
    )?;
    let wall_time = started.elapsed().as_secs_f64();

    let mut csv = csv_writer(a.out.as_deref())?;
    csv.write_record(["omega", "pushes", "touched_arcs", "wall_time"])?;
    for p in &sel.sweep_table {
        let count = |v: Option<u64>| v.map_or_else(|| "inf".to_string(), |k| k.to_string());
        csv.write_record([
            fmt_real(p.omega),
            count(p.pushes),
            count(p.touched_arcs),
            fmt_real(p.wall_time),
        ])?;
    }
    csv.flush()?;

    let mut record = RunRecord::new("sweep-omega", g.info(), source);
    record.method = Some(Method::Blisor);
    record.parameters = Some(Params::new(
        &a.push,
        &OmegaArgs {
            omega_sweep: true,
            ..Default::default()
        },
        &default_sampling(),
        a.opinions.dist.seed,
    ));
    record.omega = Some(sel);
    record.wall_time = wall_time;
    emit(&mut record, a.out.as_deref())
}

fn default_sampling() -> crate::cli::SamplingArgs {
    use fj_core::{
        forest::DEFAULT_SAMPLES,
        walk::{DEFAULT_NUM_WALKS, DEFAULT_WALK_LEN},
    };
    crate::cli::SamplingArgs {
        walk_len: DEFAULT_WALK_LEN,
        num_walks: DEFAULT_NUM_WALKS,
        samples: DEFAULT_SAMPLES,
        sample_seed: None,
    }
}

#[derive(Serialize)]
struct GenRecord {
    tool: &'static str,
    version: &'static str,
    command: &'static str,
    n: usize,
    #[serde(flatten)]
    distribution: OpinionDistribution,
    seed: u64,
    rng: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    graph: Option<GraphInfo>,
    outputs: Vec<String>,
}

pub fn gen(a: &GenArgs) -> Result<()> {
    let graph = a
        .graph
        .as_deref()
        .map(|p| read_graph(p, a.directed))
        .transpose()?;
    let n = match (&graph, a.n) {
        (Some(g), _) => g.graph.num_nodes(),
        (None, Some(n)) => n,
        (None, None) => unreachable!("clap requires --n or --graph"),
    };
    let distribution = a.params.distribution(a.dist);
    let s = distribution.generate(n, a.params.seed)?;
    let mut w = output(Some(&a.out))?;
    write_vector(s.as_slice(), &mut w)?;
    w.flush()?;

    let meta = sidecar(&a.out);
    let record = GenRecord {
        tool: "fjop",
        version: VERSION,
        command: "gen",
        n,
        distribution,
        seed: a.params.seed,
        rng: RNG_NAME,
        graph: graph.as_ref().map(LoadedGraph::info),
        outputs: vec![a.out.display().to_string(), meta.display().to_string()],
    };
    write_json(&record, &meta)
}

#[derive(Serialize)]
struct MetricsOutput {
    #[serde(flatten)]
    report: MetricsReport,
    total_stress: f64,
    per_node_stress_sum: f64,
}

pub fn metrics(a: &MetricsArgs) -> Result<()> {
    let g = load_graph(&a.graph)?;
    let n = g.graph.num_nodes();
    let (s, source) = load_opinion_vector(&a.opinions, n)?;
    let mut record = RunRecord::new("metrics", g.info(), source);
    let z = match (&a.z, a.method) {
        (Some(path), _) => {
            let z =
                read_vector(open(path)?).with_context(|| format!("reading {}", path.display()))?;
            if z.len() != n {
                bail!(Error::LengthMismatch {
                    expected: n,
                    got: z.len()
                });
            }
            z
        }
        (None, Some(method)) => {
            let params = Params::new(&a.push, &a.omega, &a.sampling, a.opinions.dist.seed);
            let started = Instant::now();
            let out = run(method, &g.graph, &s, &params)?;
            record.wall_time = started.elapsed().as_secs_f64();
            record.method = Some(method);
            record.counters = Some(counters(&out));
            record.omega = out.omega;
            record.parameters = Some(params);
            out.result.z_hat
        }
        (None, None) => unreachable!("clap requires --z or --method"),
    };
    let report = MetricsReport::compute(&g.graph, &z, s.as_slice())?;
    let Stress {
        total,
        per_node_sum,
    } = total_stress(&g.graph, &z, s.as_slice())?;
    let result = MetricsOutput {
        report,
        total_stress: total,
        per_node_stress_sum: per_node_sum,
    };

    match a.format {
        Format::Json => {
            let mut w = output(a.out.as_deref())?;
            serde_json::to_writer_pretty(&mut w, &result)?;
            writeln!(w)?;
            w.flush()?;
        }
        Format::Csv => {
            let r = &result.report;
            let mut csv = csv_writer(a.out.as_deref())?;
            csv.write_record([
                "internal_conflict",
                "disagreement",
                "polarization",
                "controversy",
                "z_mean",
                "total_stress",
                "per_node_stress_sum",
            ])?;
            csv.write_record(
                [
                    r.internal_conflict,
                    r.disagreement,
                    r.polarization,
                    r.controversy,
                    r.z_mean,
                    total,
                    per_node_sum,
                ]
                .map(fmt_real),
            )?;
            csv.flush()?;
        }
    }
    if a.out.is_some() {
        emit(&mut record, a.out.as_deref())?;
    }
    Ok(())
}
