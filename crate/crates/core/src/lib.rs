//! Strategic semantic communication over finite alphabets.
//!
//! The crate models a source observed indirectly by an encoder and
//! interpreted by a decoder holding side information, where both parties
//! minimize their own distortion. It provides:
//!
//! - [`prob`]: distributions, kernels, joint tensors and information measures;
//! - [`model`]: the communication chain and expected distortions;
//! - [`limits`]: channel capacity, rate-distortion curves and the rate
//!   feasibility test on encoder strategies;
//! - [`equilibria`]: decoder best responses and optimistic/robust Stackelberg
//!   and Nash solvers, plus an ordering audit across the three;
//! - [`scalar`]: a continuous two-parameter game where the robust
//!   Stackelberg value is strictly worse than every Nash value;
//! - [`experiments`]: config loading, sweeps and deterministic CSV/JSON output.
//!
//! Runnable walkthroughs live in the crate's `examples/` directory.

pub mod equilibria;
pub mod error;
pub mod experiments;
pub mod limits;
mod lp;
pub mod model;
pub mod prob;
pub mod scalar;

pub use error::{Error, Result};
pub use model::{ChainModel, DecoderStrategy, DistortionSpec, EncoderStrategy, Party};
pub use prob::{ConditionalKernel, FiniteDistribution, JointTensor};
