//! Computing-power-network allocation toolkit.
//!
//! * [`cpn`] evaluates the three-layer (user / edge / cloud) communication, computing and
//!   service models and produces a six-objective vector plus constraint violations.
//! * [`moea`] is an NSGA-III engine with pluggable dominance: Pareto, the strengthened
//!   dominance relation (SDR) and the kernel-distance dominance relation (KDR).
//! * [`benchmarks`] holds the DTLZ/SDTLZ problems and the IGD and PD quality metrics.
//! * [`topsis`] picks a single allocation from a final population with entropy-weighted TOPSIS.
//!
//! Everything numerical is generic over [`Scalar`] (`f32` or `f64`); the `*64` aliases below
//! are the concrete types the command-line harness uses.

// Negated comparisons are used as NaN-rejecting guards.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod benchmarks;
pub mod cpn;
mod error;
pub mod moea;
mod scalar;
pub mod topsis;

pub use error::{Error, Result};
pub use scalar::Scalar;

pub type Scenario64 = cpn::Scenario<f64>;
pub type AllocationDecision64 = cpn::AllocationDecision<f64>;
pub type ObjectiveVector64 = cpn::ObjectiveVector<f64>;
pub type ConstraintReport64 = cpn::ConstraintReport<f64>;
pub type CpnModel64 = cpn::CpnModel<f64>;
pub type CpnProblem64 = cpn::CpnProblem<f64>;
pub type Individual64 = moea::Individual<f64>;
pub type Population64 = moea::Population<f64>;
pub type EvolutionConfig64 = moea::EvolutionConfig<f64>;
pub type DominanceConfig64 = moea::DominanceConfig<f64>;
pub type BenchmarkProblem64 = benchmarks::BenchmarkProblem<f64>;
pub type DecisionMatrix64 = topsis::DecisionMatrix<f64>;
