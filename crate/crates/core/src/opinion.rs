//! Internal opinion vectors and the synthetic distributions used to draw them.

use std::io::{BufRead, Write};

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution as _, Exp1};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Name of the generator behind every seeded routine in this crate.
pub const RNG_NAME: &str = "ChaCha8";

/// Internal opinions `s`, every entry in `[0, 1]`.
#[derive(Debug, Clone, PartialEq)]
pub struct OpinionVector(Vec<f64>);

impl OpinionVector {
    pub fn new(values: Vec<f64>) -> Result<Self> {
        if let Some((i, &v)) = values
            .iter()
            .enumerate()
            .find(|(_, v)| !(0.0..=1.0).contains(*v))
        {
            return Err(Error::OpinionOutOfRange {
                line: i + 1,
                value: v,
            });
        }
        Ok(Self(values))
    }

    /// `c * 1` of length `n`.
    pub fn constant(n: usize, c: f64) -> Result<Self> {
        Self::new(vec![c; n])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.0
    }

    pub fn into_inner(self) -> Vec<f64> {
        self.0
    }

    pub fn sum(&self) -> f64 {
        self.0.iter().sum()
    }

    pub fn min(&self) -> f64 {
        self.0.iter().copied().fold(f64::INFINITY, f64::min)
    }

    pub fn max(&self) -> f64 {
        self.0.iter().copied().fold(f64::NEG_INFINITY, f64::max)
    }

    /// `s / s_sum`; all zeros when the sum is zero.
    pub fn normalized(&self) -> Vec<f64> {
        let total = self.sum();
        if total == 0.0 {
            return vec![0.0; self.len()];
        }
        self.0.iter().map(|v| v / total).collect()
    }

    pub(crate) fn check_len(&self, n: usize) -> Result<()> {
        if self.len() == n {
            Ok(())
        } else {
            Err(Error::LengthMismatch {
                expected: n,
                got: self.len(),
            })
        }
    }
}

impl std::ops::Index<usize> for OpinionVector {
    type Output = f64;
    fn index(&self, i: usize) -> &f64 {
        &self.0[i]
    }
}

/// Distribution of internal opinions, with its parameters.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "distribution", rename_all = "lowercase")]
pub enum OpinionDistribution {
    Uniform,
    Exponential { x_min: f64 },
    PowerLaw { alpha: f64, x_min: f64 },
}

impl OpinionDistribution {
    pub const DEFAULT_X_MIN: f64 = 1.0;
    pub const DEFAULT_ALPHA: f64 = 2.5;

    /// Short name as used on the command line (`unif`, `exp`, `pow`).
    pub fn short_name(&self) -> &'static str {
        match self {
            Self::Uniform => "unif",
            Self::Exponential { .. } => "exp",
            Self::PowerLaw { .. } => "pow",
        }
    }

    pub fn generate(&self, n: usize, seed: u64) -> Result<OpinionVector> {
        match *self {
            Self::Uniform => gen_uniform(n, seed),
            Self::Exponential { x_min } => gen_exponential(n, seed, x_min),
            Self::PowerLaw { alpha, x_min } => gen_powerlaw(n, seed, alpha, x_min),
        }
    }
}

fn check_n(n: usize) -> Result<()> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "opinion count must be at least 1".into(),
        ));
    }
    Ok(())
}

/// I.i.d. uniform opinions on `[0, 1]`.
pub fn gen_uniform(n: usize, seed: u64) -> Result<OpinionVector> {
    check_n(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok(OpinionVector((0..n).map(|_| rng.random::<f64>()).collect()))
}

/// Raw draws from the shifted exponential with density `e^{x_min - x}` on
/// `[x_min, inf)`.
pub fn exponential_samples(n: usize, seed: u64, x_min: f64) -> Result<Vec<f64>> {
    check_n(n)?;
    if !(x_min > 0.0 && x_min.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "x_min must be positive, got {x_min}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    Ok((0..n)
        .map(|_| {
            let e: f64 = Exp1.sample(&mut rng);
            x_min + e
        })
        .collect())
}

/// Raw Pareto draws `x_min * (1 - U)^(-1 / (alpha - 1))`.
pub fn powerlaw_samples(n: usize, seed: u64, alpha: f64, x_min: f64) -> Result<Vec<f64>> {
    check_n(n)?;
    if !(alpha > 1.0 && alpha.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "power-law exponent must exceed 1, got {alpha}"
        )));
    }
    if !(x_min > 0.0 && x_min.is_finite()) {
        return Err(Error::InvalidParameter(format!(
            "x_min must be positive, got {x_min}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let exponent = -1.0 / (alpha - 1.0);
    Ok((0..n)
        .map(|_| {
            let u: f64 = rng.random();
            x_min * (1.0 - u).powf(exponent)
        })
        .collect())
}

fn normalize_by_max(mut xs: Vec<f64>) -> OpinionVector {
    let max = xs.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    for x in &mut xs {
        *x /= max;
    }
    OpinionVector(xs)
}

/// Shifted-exponential opinions scaled by the sample maximum.
pub fn gen_exponential(n: usize, seed: u64, x_min: f64) -> Result<OpinionVector> {
    exponential_samples(n, seed, x_min).map(normalize_by_max)
}

/// Power-law opinions scaled by the sample maximum.
pub fn gen_powerlaw(n: usize, seed: u64, alpha: f64, x_min: f64) -> Result<OpinionVector> {
    powerlaw_samples(n, seed, alpha, x_min).map(normalize_by_max)
}

/// One real per line; blank lines are ignored.
pub fn read_vector<R: BufRead>(reader: R) -> Result<Vec<f64>> {
    let mut out = Vec::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line?;
        let body = line.trim();
        if body.is_empty() {
            continue;
        }
        let v: f64 = body.parse().map_err(|_| Error::Parse {
            line: lineno + 1,
            msg: format!("{body:?} is not a real number"),
        })?;
        out.push(v);
    }
    Ok(out)
}

/// Reads `n` opinions, node `v` on line `v + 1`.
pub fn load_opinions<R: BufRead>(reader: R, n: usize) -> Result<OpinionVector> {
    let values = read_vector(reader)?;
    let s = OpinionVector::new(values)?;
    s.check_len(n)?;
    Ok(s)
}

/// Writes one value per line with 17 significant digits.
pub fn write_vector<W: Write>(values: &[f64], mut out: W) -> Result<()> {
    for v in values {
        writeln!(out, "{}", fmt_real(*v))?;
    }
    Ok(())
}

/// 17 significant digits, enough for a lossless `f64` round trip.
pub fn fmt_real(v: f64) -> String {
    format!("{v:.16e}")
}
