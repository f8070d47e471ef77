//! Three-layer computing power network model.

pub mod communication;
pub mod computing;
mod generator;
mod model;
mod problem;
pub mod service;
mod types;

pub use communication::{noma_rates, transmission_energy, transmission_latency, UserLink};
pub use computing::{compute_energy, compute_latency, erlang_c, layer_arrival_rates, queueing_delay, ErlangVariant, LayerPool};
pub use generator::{dbm_to_watts, GeneratorConfig};
pub use model::{check_constraints, evaluate_objectives, CpnModel};
pub use problem::CpnProblem;
pub use service::{load_balancing, occupancy_average, occupancy_total, privacy_entropy, sharing_revenue};
pub use types::{
    AllocationDecision, ChannelParams, ConstraintReport, Device, Economics, Layer, ObjectiveVector, PerLayer, Scenario, Task, BITS_PER_KB,
};
