use rand::seq::index::sample;
use rand::RngCore;

use crate::cpn::model::CpnModel;
use crate::cpn::types::{AllocationDecision, Layer};
use crate::moea::{Evaluation, Genome, GenomeLayout, Problem, SimplexBlock};
use crate::{Result, Scalar};

/// Allocation search space: one probability triple per task (a simplex block restricted to
/// the layers the task may reach) followed by one occupancy bit per device.
///
/// Objectives are the canonical six-vector from [`CpnModel::evaluate_relaxed`]; the
/// violation is the constraint report's total.
#[derive(Debug, Clone)]
pub struct CpnProblem<T> {
    model: CpnModel<T>,
    initial_occupancy: T,
}

impl<T: Scalar> CpnProblem<T> {
    pub fn new(model: CpnModel<T>) -> Self {
        Self { model, initial_occupancy: T::of(0.5) }
    }

    /// Fraction of devices switched on in every initial genome (default one half).
    pub fn with_initial_occupancy(mut self, fraction: T) -> Self {
        self.initial_occupancy = fraction.max(T::zero()).min(T::one());
        self
    }

    pub fn model(&self) -> &CpnModel<T> {
        &self.model
    }

    fn allowed(&self, source: Layer) -> Vec<bool> {
        Layer::ALL.iter().map(|&l| source.can_offload_to(l) && !self.model.layer_devices(l).is_empty()).collect()
    }

    pub fn decision(&self, genome: &Genome<T>) -> AllocationDecision<T> {
        AllocationDecision { layer_probs: genome.reals.chunks(3).map(|c| [c[0], c[1], c[2]]).collect(), occupancy: genome.bits.clone() }
    }

    pub fn genome(&self, decision: &AllocationDecision<T>) -> Genome<T> {
        Genome { reals: decision.layer_probs.iter().flatten().copied().collect(), bits: decision.occupancy.clone() }
    }
}

impl<T: Scalar> Problem<T> for CpnProblem<T> {
    fn objective_count(&self) -> usize {
        6
    }

    fn layout(&self) -> GenomeLayout<T> {
        let tasks = self.model.task_sources();
        GenomeLayout {
            lower: vec![T::zero(); 3 * tasks.len()],
            upper: vec![T::one(); 3 * tasks.len()],
            simplex_blocks: tasks.iter().enumerate().map(|(t, &src)| SimplexBlock { start: 3 * t, allowed: self.allowed(src) }).collect(),
            bits: self.model.scenario().devices.len(),
        }
    }

    fn evaluate(&self, genome: &Genome<T>) -> Result<Evaluation<T>> {
        let decision = self.decision(genome);
        let objectives = self.model.evaluate_relaxed(&decision)?.canonical().to_vec();
        let violation = self.model.check_constraints(&decision)?.total_violation();
        Ok(Evaluation { objectives, violation })
    }

    /// Uniform probabilities over each task's reachable layers and a random subset of
    /// exactly `initial_occupancy · D` devices switched on.
    fn initial_genome(&self, rng: &mut dyn RngCore) -> Genome<T> {
        let mut reals = Vec::new();
        for &src in self.model.task_sources() {
            let allowed = self.allowed(src);
            let k = T::of_usize(allowed.iter().filter(|a| **a).count());
            reals.extend(allowed.iter().map(|&a| if a { T::one() / k } else { T::zero() }));
        }
        let d = self.model.scenario().devices.len();
        let on = (self.initial_occupancy * T::of_usize(d)).floor().to_usize().unwrap_or(0).min(d);
        let mut bits = vec![false; d];
        for i in sample(rng, d, on).into_iter() {
            bits[i] = true;
        }
        Genome { reals, bits }
    }
}
