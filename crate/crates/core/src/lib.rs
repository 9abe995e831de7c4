//! Friedkin-Johnsen equilibrium opinions on sparse graphs.
//!
//! The equilibrium of the Friedkin-Johnsen model with internal opinions `s`
//! is `z = (I + L)^{-1} s`. This crate estimates `z` with local residual
//! pushing ([`push`]), its over-relaxed variant ([`sor`]), discounted random
//! walks ([`walk`]) and converging-forest sampling ([`forest`]), checks them
//! against dense ground truth ([`exact`]) and derives the usual conflict and
//! polarization summaries ([`metrics`]).
//!
//! ```
//! use fj_core::graph::path;
//! use fj_core::opinion::OpinionVector;
//! use fj_core::push::improved_bli;
//!
//! let g = path(2);
//! let s = OpinionVector::new(vec![1.0, 0.0]).unwrap();
//! let est = improved_bli(&g, &s, 1e-2, 1e-5, 1e-5).unwrap();
//! assert!((est.z_hat[0] - 2.0 / 3.0).abs() < 1e-2);
//! ```

pub mod error;
pub mod exact;
pub mod forest;
pub mod graph;
pub mod metrics;
pub mod opinion;
pub mod par;
pub mod push;
pub mod result;
pub mod sor;
pub mod walk;

pub use error::{Error, Result};
pub use graph::Graph;
pub use opinion::OpinionVector;
pub use result::{EstimateResult, Method};
