//! DTLZ-family test problems and the IGD and PD quality indicators.

mod metrics;
mod problems;

pub use metrics::{igd, pd, quasi_norm_dissimilarity};
pub use problems::{BenchmarkKind, BenchmarkProblem, FrontSample};
