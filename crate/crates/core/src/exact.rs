//! Ground truth for small graphs: a dense LU solve of `(I + L) z = s` and the
//! synchronous opinion update it is the fixed point of.

use nalgebra::{DMatrix, DVector, Dyn, LU};

use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::opinion::OpinionVector;

pub const DEFAULT_DENSE_CAP: usize = 5000;
pub const DEFAULT_SYNC_TOL: f64 = 1e-12;
pub const DEFAULT_SYNC_MAX_ITERS: usize = 1_000_000;

/// Dense `I + L`: row `i` holds `1 + d_i` on the diagonal and `-1` at every
/// node `i` listens to. Rows sum to one.
#[derive(Debug, Clone)]
pub struct DenseSystem {
    matrix: DMatrix<f64>,
}

impl DenseSystem {
    pub fn new(graph: &Graph) -> Result<Self> {
        Self::with_cap(graph, DEFAULT_DENSE_CAP)
    }

    pub fn with_cap(graph: &Graph, cap: usize) -> Result<Self> {
        let n = graph.num_nodes();
        if n > cap {
            return Err(Error::DenseCapExceeded { n, cap });
        }
        let mut matrix = DMatrix::zeros(n, n);
        for i in 0..n {
            matrix[(i, i)] = 1.0 + graph.degree(i) as f64;
            for &j in graph.out_neighbors(i) {
                matrix[(i, j)] = -1.0;
            }
        }
        Ok(Self { matrix })
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    /// `max_i |((I + L) z - rhs)_i|`.
    pub fn residual_inf(&self, z: &[f64], rhs: &[f64]) -> f64 {
        let z = DVector::from_column_slice(z);
        let r = &self.matrix * z - DVector::from_column_slice(rhs);
        r.amax()
    }

    /// Partial-pivot LU, reusable across right-hand sides.
    pub fn factorize(&self) -> DenseOracle {
        DenseOracle {
            n: self.matrix.nrows(),
            lu: self.matrix.clone().lu(),
        }
    }
}

/// Factorized `I + L`.
pub struct DenseOracle {
    n: usize,
    lu: LU<f64, Dyn, Dyn>,
}

impl DenseOracle {
    pub fn new(graph: &Graph) -> Result<Self> {
        Ok(DenseSystem::new(graph)?.factorize())
    }

    /// Solves `(I + L) x = rhs` for an arbitrary right-hand side.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>> {
        if rhs.len() != self.n {
            return Err(Error::LengthMismatch {
                expected: self.n,
                got: rhs.len(),
            });
        }
        let b = DVector::from_column_slice(rhs);
        self.lu
            .solve(&b)
            .map(|x| x.as_slice().to_vec())
            .ok_or(Error::Singular)
    }

    /// `(I + L)^{-1}`; entry `(i, u)` is the probability that the discounted
    /// walk started at `i` stops at `u`.
    pub fn fundamental_matrix(&self) -> Result<DMatrix<f64>> {
        self.lu
            .solve(&DMatrix::identity(self.n, self.n))
            .ok_or(Error::Singular)
    }
}

/// Equilibrium `z = (I + L)^{-1} s` by dense LU.
pub fn solve_dense(graph: &Graph, s: &OpinionVector) -> Result<Vec<f64>> {
    s.check_len(graph.num_nodes())?;
    DenseOracle::new(graph)?.solve(s.as_slice())
}

#[derive(Debug, Clone)]
pub struct SyncOutcome {
    pub z: Vec<f64>,
    pub iterations: usize,
    /// `max_i |z_i^{(t+1)} - z_i^{(t)}|` of the last step.
    pub last_delta: f64,
}

/// Runs `z_i <- (s_i + sum_{j in N_i} z_j) / (1 + d_i)` from `z = s` until the
/// step size drops to `tol` in the max norm.
pub fn iterate_sync(
    graph: &Graph,
    s: &OpinionVector,
    tol: f64,
    max_iters: usize,
) -> Result<SyncOutcome> {
    s.check_len(graph.num_nodes())?;
    if tol.is_nan() || tol <= 0.0 {
        return Err(Error::InvalidParameter(format!(
            "tolerance must be positive, got {tol}"
        )));
    }
    let s = s.as_slice();
    let mut z = s.to_vec();
    let mut next = vec![0.0; z.len()];
    let mut last_delta = f64::INFINITY;
    for t in 1..=max_iters {
        last_delta = sync_step(graph, s, &z, &mut next);
        std::mem::swap(&mut z, &mut next);
        if last_delta <= tol {
            return Ok(SyncOutcome {
                z,
                iterations: t,
                last_delta,
            });
        }
    }
    Err(Error::NoConvergence {
        iterations: max_iters,
        last_delta,
    })
}

/// One synchronous update `z -> next`; returns the max-norm step.
fn sync_step(graph: &Graph, s: &[f64], z: &[f64], next: &mut [f64]) -> f64 {
    let mut delta = 0.0f64;
    for (i, zi) in next.iter_mut().enumerate() {
        let acc: f64 = s[i] + graph.out_neighbors(i).iter().map(|&j| z[j]).sum::<f64>();
        *zi = acc / (1.0 + graph.degree(i) as f64);
        delta = delta.max((*zi - z[i]).abs());
    }
    delta
}
