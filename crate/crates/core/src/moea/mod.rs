//! NSGA-III with Pareto, SDR or KDR dominance.

pub mod dominance;
mod engine;
mod genome;
pub mod niching;
pub mod reference;
pub mod sorting;
pub mod variation;

pub use dominance::{
    euclidean_distance, kdr_dominates, kernel_distance, niche_threshold, pairwise_angle, pareto_dominates, sdr_dominates, DominanceConfig,
    PreparedDominance, Relation,
};
pub use engine::{evolve, Evaluation, EvolutionConfig, EvolutionOutcome, Evolver, GenerationStats, Individual, Population, Problem};
pub use genome::{Genome, GenomeLayout, SimplexBlock};
pub use niching::associate_and_niche;
pub use reference::{auto_reference_points, generate_reference_points, two_layer_reference_points, ReferencePointSet};
pub use sorting::{non_dominated_sort, DominanceRelation, FnRelation};
pub use variation::{variation, VariationParams};
