//! Derivative-free optimization of noisy objectives with the Eagle Strategy:
//! Lévy-walk exploration alternating with firefly or Nelder-Mead intensification
//! inside a shrinking hypersphere. Includes a particle swarm baseline, a
//! registry of classic benchmark functions, and a seeded experiment harness.

// `!(x > 0.0)` style checks are deliberate: they reject NaN too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod domain;
pub mod eagle;
pub mod error;
pub mod firefly;
pub mod functions;
pub mod harness;
pub mod levy;
pub mod nelder_mead;
pub mod objective;
pub mod pso;
pub mod result;
pub mod rng;

pub use domain::{Bounds, DesignVector, Region};
pub use eagle::{es_optimize, EsConfig, LevyScale, LocalSearch, Termination};
pub use error::{Error, Result};
pub use firefly::{fa_optimize, FaConfig, PairScan};
pub use functions::{problem, BenchmarkProblem, TestFunction};
pub use levy::LevyConfig;
pub use nelder_mead::{nelder_mead, NmConfig};
pub use objective::{robust_score, Estimate, NoiseKind, NoiseModel, NoisyObjective};
pub use pso::{pso_optimize, PsoConfig};
pub use result::{OptimizationResult, Source, TracePoint};
pub use rng::RngStream;
