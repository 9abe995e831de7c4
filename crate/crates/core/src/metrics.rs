//! Quadratic summaries of an equilibrium vector: internal conflict,
//! disagreement, polarization and controversy. Sums are compensated.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Graph;

/// Neumaier-compensated sum.
pub fn compensated_sum<I: IntoIterator<Item = f64>>(values: I) -> f64 {
    let mut sum = 0.0f64;
    let mut comp = 0.0f64;
    for v in values {
        let t = sum + v;
        if sum.abs() >= v.abs() {
            comp += (sum - t) + v;
        } else {
            comp += (v - t) + sum;
        }
        sum = t;
    }
    sum + comp
}

fn check(expected: usize, got: usize) -> Result<()> {
    if expected == got {
        Ok(())
    } else {
        Err(Error::LengthMismatch { expected, got })
    }
}

/// `I = sum_v (z_v - s_v)^2`.
pub fn internal_conflict(z: &[f64], s: &[f64]) -> Result<f64> {
    check(z.len(), s.len())?;
    Ok(compensated_sum(
        z.iter().zip(s).map(|(a, b)| (a - b) * (a - b)),
    ))
}

/// `D = sum over edges (z_i - z_j)^2`, each undirected edge (or directed arc)
/// counted once.
pub fn disagreement(graph: &Graph, z: &[f64]) -> Result<f64> {
    check(graph.num_nodes(), z.len())?;
    Ok(compensated_sum(graph.edges().map(|(i, j)| {
        let d = z[i] - z[j];
        d * d
    })))
}

pub fn mean(z: &[f64]) -> f64 {
    if z.is_empty() {
        0.0
    } else {
        compensated_sum(z.iter().copied()) / z.len() as f64
    }
}

/// `z - mean(z) 1`.
pub fn mean_centered(z: &[f64]) -> Vec<f64> {
    let m = mean(z);
    z.iter().map(|v| v - m).collect()
}

/// `P = |z - mean(z) 1|^2`.
pub fn polarization(z: &[f64]) -> f64 {
    let m = mean(z);
    compensated_sum(z.iter().map(|v| (v - m) * (v - m)))
}

/// `C = |z|^2`.
pub fn controversy(z: &[f64]) -> f64 {
    compensated_sum(z.iter().map(|v| v * v))
}

/// Total stress two ways: `I + D` (edges once), and the sum of per-node
/// stresses `(z_i - s_i)^2 + sum_{j in N_i} (z_i - z_j)^2`, which counts an
/// undirected edge from both ends.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Stress {
    pub total: f64,
    pub per_node_sum: f64,
}

pub fn node_stress(graph: &Graph, z: &[f64], s: &[f64]) -> Result<Vec<f64>> {
    check(graph.num_nodes(), z.len())?;
    check(z.len(), s.len())?;
    Ok((0..z.len())
        .map(|i| {
            let own = (z[i] - s[i]) * (z[i] - s[i]);
            own + compensated_sum(
                graph
                    .out_neighbors(i)
                    .iter()
                    .map(|&j| (z[i] - z[j]) * (z[i] - z[j])),
            )
        })
        .collect())
}

pub fn total_stress(graph: &Graph, z: &[f64], s: &[f64]) -> Result<Stress> {
    let total = internal_conflict(z, s)? + disagreement(graph, z)?;
    let per_node_sum = compensated_sum(node_stress(graph, z, s)?);
    Ok(Stress {
        total,
        per_node_sum,
    })
}

/// The four summaries plus context.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MetricsReport {
    pub internal_conflict: f64,
    pub disagreement: f64,
    pub polarization: f64,
    pub controversy: f64,
    pub z_mean: f64,
    pub n: usize,
    pub m: usize,
}

impl MetricsReport {
    pub fn compute(graph: &Graph, z: &[f64], s: &[f64]) -> Result<Self> {
        Ok(Self {
            internal_conflict: internal_conflict(z, s)?,
            disagreement: disagreement(graph, z)?,
            polarization: polarization(z),
            controversy: controversy(z),
            z_mean: mean(z),
            n: graph.num_nodes(),
            m: graph.num_edges(),
        })
    }

    /// `[C, D, I, P]`, the column order of comparison tables.
    pub fn as_cdip(&self) -> [f64; 4] {
        [
            self.controversy,
            self.disagreement,
            self.internal_conflict,
            self.polarization,
        ]
    }
}
