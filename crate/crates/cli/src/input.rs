use std::fs::File;
use std::io::BufReader;
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use fj_core::graph::load_edge_list;
use fj_core::opinion::{load_opinions, OpinionDistribution, RNG_NAME};
use fj_core::{Graph, OpinionVector};
use serde::Serialize;

use crate::cli::{GraphArgs, OpinionArgs};

pub struct LoadedGraph {
    pub path: PathBuf,
    pub graph: Graph,
    pub hash: String,
}

#[derive(Debug, Clone, Serialize)]
pub struct GraphInfo {
    pub path: String,
    pub sha256: String,
    pub directed: bool,
    pub n: usize,
    pub m: usize,
    pub d_max: usize,
}

impl LoadedGraph {
    pub fn info(&self) -> GraphInfo {
        GraphInfo {
            path: self.path.display().to_string(),
            sha256: self.hash.clone(),
            directed: self.graph.is_directed(),
            n: self.graph.num_nodes(),
            m: self.graph.num_edges(),
            d_max: self.graph.max_degree(),
        }
    }
}

/// Where the internal opinions came from.
#[derive(Debug, Clone, Serialize)]
#[serde(tag = "source", rename_all = "lowercase")]
pub enum OpinionSource {
    File {
        path: String,
    },
    Generated {
        #[serde(flatten)]
        distribution: OpinionDistribution,
        seed: u64,
        rng: &'static str,
    },
}

pub fn open(path: &Path) -> Result<BufReader<File>> {
    let file = File::open(path).with_context(|| format!("cannot open {}", path.display()))?;
    Ok(BufReader::new(file))
}

pub fn read_graph(path: &Path, directed: bool) -> Result<LoadedGraph> {
    let graph = load_edge_list(open(path)?, directed)
        .with_context(|| format!("reading graph {}", path.display()))?;
    let hash = graph.content_hash();
    Ok(LoadedGraph {
        path: path.to_path_buf(),
        graph,
        hash,
    })
}

pub fn load_graph(args: &GraphArgs) -> Result<LoadedGraph> {
    read_graph(&args.graph, args.directed)
}

pub fn load_opinion_vector(args: &OpinionArgs, n: usize) -> Result<(OpinionVector, OpinionSource)> {
    if let Some(path) = &args.opinions {
        let s = load_opinions(open(path)?, n)
            .with_context(|| format!("reading opinions {}", path.display()))?;
        return Ok((
            s,
            OpinionSource::File {
                path: path.display().to_string(),
            },
        ));
    }
    let dist = args
        .dist
        .distribution(args.gen.expect("clap requires --opinions or --gen"));
    let s = dist.generate(n, args.dist.seed)?;
    Ok((
        s,
        OpinionSource::Generated {
            distribution: dist,
            seed: args.dist.seed,
            rng: RNG_NAME,
        },
    ))
}
