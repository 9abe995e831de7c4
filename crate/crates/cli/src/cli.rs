use std::path::PathBuf;

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use fj_core::forest::DEFAULT_SAMPLES;
use fj_core::opinion::OpinionDistribution;
use fj_core::par::WORKERS_ENV;
use fj_core::push::{DEFAULT_C, DEFAULT_EPSILON, DEFAULT_MAX_PUSHES, DEFAULT_SIGMA};
use fj_core::walk::{DEFAULT_NUM_WALKS, DEFAULT_WALK_LEN};
use fj_core::Method;

#[derive(Debug, Parser)]
#[command(
    name = "fjop",
    version,
    about = "Friedkin-Johnsen equilibrium opinions on large graphs"
)]
pub struct Cli {
    /// Worker threads for parallel work (walks, forests, sweeps, bench cells).
    #[arg(long, global = true, env = WORKERS_ENV)]
    pub workers: Option<usize>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Estimate the equilibrium vector with one method.
    Solve(SolveArgs),
    /// Relative errors of several methods against a reference solution.
    Compare(CompareArgs),
    /// Timing table over graphs x methods x opinion distributions.
    Bench(BenchArgs),
    /// Push counts of the shifted SOR solver over a grid of relaxation factors.
    SweepOmega(SweepArgs),
    /// Generate an internal-opinion file.
    Gen(GenArgs),
    /// Conflict, disagreement, polarization and controversy of an opinion vector.
    Metrics(MetricsArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Dist {
    Unif,
    Exp,
    Pow,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Reference {
    Exact,
    Sync,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Args)]
pub struct GraphArgs {
    /// Edge list, one `u v` pair per line; `#` and `%` start comments.
    #[arg(long)]
    pub graph: PathBuf,
    /// Treat each line `u v` as the arc "u listens to v".
    #[arg(long)]
    pub directed: bool,
}

#[derive(Debug, Clone, Args)]
#[command(group(ArgGroup::new("source").required(true).args(["opinions", "gen"])))]
pub struct OpinionArgs {
    /// File with one opinion in [0, 1] per line.
    #[arg(long)]
    pub opinions: Option<PathBuf>,
    /// Generate opinions instead of reading them.
    #[arg(long, value_enum)]
    pub gen: Option<Dist>,
    #[command(flatten)]
    pub dist: DistParams,
}

#[derive(Debug, Clone, Args)]
pub struct DistParams {
    #[arg(long, default_value_t = 0)]
    pub seed: u64,
    /// Scale of the exponential and power-law generators.
    #[arg(long, default_value_t = OpinionDistribution::DEFAULT_X_MIN)]
    pub x_min: f64,
    /// Power-law exponent.
    #[arg(long, default_value_t = OpinionDistribution::DEFAULT_ALPHA)]
    pub alpha: f64,
}

impl DistParams {
    pub fn distribution(&self, dist: Dist) -> OpinionDistribution {
        match dist {
            Dist::Unif => OpinionDistribution::Uniform,
            Dist::Exp => OpinionDistribution::Exponential { x_min: self.x_min },
            Dist::Pow => OpinionDistribution::PowerLaw {
                alpha: self.alpha,
                x_min: self.x_min,
            },
        }
    }
}

#[derive(Debug, Clone, Args)]
pub struct PushArgs {
    #[arg(long, default_value_t = DEFAULT_EPSILON)]
    pub epsilon: f64,
    /// Opinions below sigma are not covered by the relative-error band.
    #[arg(long, default_value_t = DEFAULT_SIGMA)]
    pub sigma: f64,
    /// Constant added to every opinion by the shifted solvers.
    #[arg(long, default_value_t = DEFAULT_C)]
    pub c: f64,
    /// Abort after this many pushes.
    #[arg(long, default_value_t = DEFAULT_MAX_PUSHES)]
    pub max_pushes: u64,
}

#[derive(Debug, Clone, Default, Args)]
#[command(group(ArgGroup::new("omega_choice").args(["omega", "omega_sweep", "omega_formula"])))]
pub struct OmegaArgs {
    /// Fixed relaxation factor in (0, 2). Default 1.5 on undirected graphs.
    #[arg(long)]
    pub omega: Option<f64>,
    /// Pick omega by sweeping a grid (the default on directed graphs).
    #[arg(long)]
    pub omega_sweep: bool,
    /// Pick omega from the spectral radius (undirected graphs only).
    #[arg(long)]
    pub omega_formula: bool,
}

#[derive(Debug, Clone, Args)]
pub struct SamplingArgs {
    /// Maximum moves per random walk.
    #[arg(long, default_value_t = DEFAULT_WALK_LEN)]
    pub walk_len: usize,
    /// Walks per node.
    #[arg(long, default_value_t = DEFAULT_NUM_WALKS)]
    pub num_walks: usize,
    /// Sampled forests.
    #[arg(long, default_value_t = DEFAULT_SAMPLES)]
    pub samples: usize,
    /// Seed for the walk and forest samplers. Defaults to `--seed` + 1.
    #[arg(long)]
    pub sample_seed: Option<u64>,
}

#[derive(Debug, Args)]
pub struct SolveArgs {
    #[arg(long)]
    pub method: Method,
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub opinions: OpinionArgs,
    #[command(flatten)]
    pub push: PushArgs,
    #[command(flatten)]
    pub omega: OmegaArgs,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    /// Output z-file; metadata goes to `<out>.json`. Defaults to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct CompareArgs {
    /// Comma-separated methods to evaluate.
    #[arg(long, value_delimiter = ',', default_value = "bli,blisor,rwb,forest")]
    pub methods: Vec<Method>,
    #[arg(long, value_enum, default_value_t = Reference::Exact)]
    pub reference: Reference,
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub opinions: OpinionArgs,
    #[command(flatten)]
    pub push: PushArgs,
    #[command(flatten)]
    pub omega: OmegaArgs,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    /// CSV output. Defaults to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct BenchArgs {
    /// Edge-list files; repeat the flag for several graphs.
    #[arg(long = "graph", required = true)]
    pub graphs: Vec<PathBuf>,
    #[arg(long)]
    pub directed: bool,
    #[arg(long, value_delimiter = ',', default_value = "bli,blisor")]
    pub methods: Vec<Method>,
    #[arg(
        long,
        value_enum,
        value_delimiter = ',',
        default_value = "unif,exp,pow"
    )]
    pub dists: Vec<Dist>,
    #[command(flatten)]
    pub dist: DistParams,
    /// Repetitions per cell; the median wall time is reported.
    #[arg(long, default_value_t = 3)]
    pub reps: usize,
    #[command(flatten)]
    pub push: PushArgs,
    #[command(flatten)]
    pub omega: OmegaArgs,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct SweepArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub opinions: OpinionArgs,
    #[command(flatten)]
    pub push: PushArgs,
    #[arg(long)]
    pub omega_start: Option<f64>,
    #[arg(long)]
    pub omega_end: Option<f64>,
    #[arg(long)]
    pub omega_step: Option<f64>,
    /// CSV output; metadata goes to `<out>.json`. Defaults to stdout.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("size").required(true).args(["n", "graph"])))]
pub struct GenArgs {
    #[arg(long, value_enum, default_value_t = Dist::Unif)]
    pub dist: Dist,
    /// Number of opinions.
    #[arg(long)]
    pub n: Option<usize>,
    /// Take the number of opinions from this graph.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long, requires = "graph")]
    pub directed: bool,
    #[command(flatten)]
    pub params: DistParams,
    /// Opinion file; metadata goes to `<out>.json`.
    #[arg(long)]
    pub out: PathBuf,
}

#[derive(Debug, Args)]
#[command(group(ArgGroup::new("z_source").required(true).args(["z", "method"])))]
pub struct MetricsArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub opinions: OpinionArgs,
    /// Expressed-opinion file written by `solve`.
    #[arg(long)]
    pub z: Option<PathBuf>,
    /// Solve first with this method instead of reading a z-file.
    #[arg(long)]
    pub method: Option<Method>,
    #[command(flatten)]
    pub push: PushArgs,
    #[command(flatten)]
    pub omega: OmegaArgs,
    #[command(flatten)]
    pub sampling: SamplingArgs,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    #[arg(long)]
    pub out: Option<PathBuf>,
}
