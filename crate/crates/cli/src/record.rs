use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::path::{Path, PathBuf};

use anyhow::{Context, Result};
use fj_core::sor::OmegaSelection;
use fj_core::Method;
use serde::Serialize;

use crate::input::{GraphInfo, OpinionSource};
use crate::run::Params;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

#[derive(Debug, Default, Clone, Copy, Serialize)]
pub struct Counters {
    pub pushes: u64,
    pub touched_arcs: u64,
    pub walks: u64,
    pub samples: u64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub iterations: Option<usize>,
}

/// Everything needed to reproduce an output file.
#[derive(Debug, Serialize)]
pub struct RunRecord {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub method: Option<Method>,
    pub graph: GraphInfo,
    pub opinions: OpinionSource,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub parameters: Option<Params>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub omega: Option<OmegaSelection>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub counters: Option<Counters>,
    /// Seconds, including any omega selection.
    pub wall_time: f64,
    pub outputs: Vec<String>,
}

impl RunRecord {
    pub fn new(command: &'static str, graph: GraphInfo, opinions: OpinionSource) -> Self {
        Self {
            tool: "fjop",
            version: VERSION,
            command,
            method: None,
            graph,
            opinions,
            parameters: None,
            omega: None,
            counters: None,
            wall_time: 0.0,
            outputs: Vec::new(),
        }
    }
}

/// `<path>.json`.
pub fn sidecar(path: &Path) -> PathBuf {
    let mut name = path.as_os_str().to_owned();
    name.push(".json");
    PathBuf::from(name)
}

pub fn create(path: &Path) -> Result<BufWriter<File>> {
    let file = File::create(path).with_context(|| format!("cannot create {}", path.display()))?;
    Ok(BufWriter::new(file))
}

/// Opens `path`, or stdout when absent.
pub fn output(path: Option<&Path>) -> Result<Box<dyn Write>> {
    Ok(match path {
        Some(p) => Box::new(create(p)?),
        None => Box::new(BufWriter::new(io::stdout().lock())),
    })
}

pub fn write_json<T: Serialize>(value: &T, path: &Path) -> Result<()> {
    let mut out = create(path)?;
    serde_json::to_writer_pretty(&mut out, value)?;
    writeln!(out)?;
    out.flush()
        .with_context(|| format!("writing {}", path.display()))
}

/// Writes the record next to `out` when there is one, otherwise to stderr.
pub fn emit(record: &mut RunRecord, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => {
            let meta = sidecar(p);
            record.outputs = vec![p.display().to_string(), meta.display().to_string()];
            write_json(record, &meta)
        }
        None => {
            eprintln!("{}", serde_json::to_string(record)?);
            Ok(())
        }
    }
}
