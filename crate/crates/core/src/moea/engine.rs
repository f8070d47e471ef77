use std::collections::HashSet;

use rand::{Rng, RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::moea::dominance::{DominanceConfig, PreparedDominance};
use crate::moea::genome::{Genome, GenomeLayout};
use crate::moea::niching::associate_and_niche;
use crate::moea::reference::{auto_reference_points, generate_reference_points, ReferencePointSet};
use crate::moea::sorting::non_dominated_sort;
use crate::moea::variation::{variation, VariationParams};
use crate::{Error, Result, Scalar};

/// Objectives in minimisation form plus the aggregated constraint violation.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Evaluation<T> {
    pub objectives: Vec<T>,
    pub violation: T,
}

pub trait Problem<T: Scalar> {
    fn objective_count(&self) -> usize;

    fn layout(&self) -> GenomeLayout<T>;

    fn evaluate(&self, genome: &Genome<T>) -> Result<Evaluation<T>>;

    /// A random starting genome: reals uniform within bounds (then repaired), bits fair coins.
    fn initial_genome(&self, rng: &mut dyn RngCore) -> Genome<T> {
        let layout = self.layout();
        let mut g = Genome {
            reals: layout.lower.iter().zip(&layout.upper).map(|(&l, &u)| l + (u - l) * T::of(rng.gen::<f64>())).collect(),
            bits: (0..layout.bits).map(|_| rng.gen::<bool>()).collect(),
        };
        layout.repair(&mut g);
        g
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Individual<T> {
    pub genome: Genome<T>,
    pub objectives: Vec<T>,
    pub violation: T,
}

impl<T: Scalar> Individual<T> {
    pub fn is_feasible(&self) -> bool {
        self.violation <= T::zero()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Population<T> {
    pub members: Vec<Individual<T>>,
    pub generation: usize,
}

impl<T: Scalar> Population<T> {
    pub fn objectives(&self) -> Vec<Vec<T>> {
        self.members.iter().map(|m| m.objectives.clone()).collect()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvolutionConfig<T> {
    pub pop_size: usize,
    pub generations: usize,
    pub crossover_prob: T,
    /// Per-gene mutation probability; `None` means one over the gene count.
    pub mutation_prob: Option<T>,
    pub distribution_index: T,
    pub seed: u64,
    /// Lattice divisions for the reference points; `None` picks the densest lattice that
    /// does not exceed the population size.
    pub reference_divisions: Option<usize>,
}

impl<T: Scalar> EvolutionConfig<T> {
    pub fn new(pop_size: usize, generations: usize, seed: u64) -> Self {
        Self {
            pop_size,
            generations,
            crossover_prob: T::one(),
            mutation_prob: None,
            distribution_index: T::of(20.0),
            seed,
            reference_divisions: None,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.pop_size < 4 || !self.pop_size.is_multiple_of(2) {
            return Err(Error::InvalidConfig(format!("population size must be even and at least 4, got {}", self.pop_size)));
        }
        let unit = |v: T| v >= T::zero() && v <= T::one();
        if !unit(self.crossover_prob) {
            return Err(Error::InvalidConfig("crossover probability outside [0, 1]".into()));
        }
        if let Some(p) = self.mutation_prob {
            if !unit(p) {
                return Err(Error::InvalidConfig("mutation probability outside [0, 1]".into()));
            }
        }
        if !(self.distribution_index >= T::zero()) {
            return Err(Error::InvalidConfig("distribution index must be non-negative".into()));
        }
        Ok(())
    }
}

/// Per-generation summary handed to the observer.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GenerationStats<T> {
    pub generation: usize,
    /// Componentwise minimum of the population's objectives.
    pub ideal: Vec<T>,
    pub feasible: usize,
    pub first_front: usize,
    pub mean_violation: T,
    /// Dominance checks spent in this generation's sort.
    pub comparisons: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolutionOutcome<T> {
    /// The evaluated starting population.
    pub initial: Population<T>,
    pub final_population: Population<T>,
    pub stats: Vec<GenerationStats<T>>,
}

/// NSGA-III with a pluggable dominance relation.
pub struct Evolver<'a, T: Scalar, P: Problem<T> + ?Sized> {
    problem: &'a P,
    config: EvolutionConfig<T>,
    dominance: DominanceConfig<T>,
    layout: GenomeLayout<T>,
    references: ReferencePointSet<T>,
    rng: ChaCha8Rng,
}

impl<'a, T: Scalar, P: Problem<T> + ?Sized> Evolver<'a, T, P> {
    pub fn new(problem: &'a P, config: EvolutionConfig<T>, dominance: DominanceConfig<T>) -> Result<Self> {
        config.validate()?;
        dominance.validate()?;
        let layout = problem.layout();
        layout.validate()?;
        let m = problem.objective_count();
        let references = match config.reference_divisions {
            Some(h) => generate_reference_points(m, h)?,
            None => auto_reference_points(m, config.pop_size)?,
        };
        Ok(Self { problem, rng: ChaCha8Rng::seed_from_u64(config.seed), config, dominance, layout, references })
    }

    pub fn references(&self) -> &ReferencePointSet<T> {
        &self.references
    }

    fn evaluate(&self, genomes: Vec<Genome<T>>) -> Result<Vec<Individual<T>>> {
        let m = self.problem.objective_count();
        genomes
            .into_iter()
            .map(|genome| {
                let e = self.problem.evaluate(&genome)?;
                if e.objectives.len() != m {
                    return Err(Error::DimensionMismatch { expected: m, found: e.objectives.len() });
                }
                if !(e.violation >= T::zero()) {
                    return Err(Error::InvalidInput(format!("violation must be non-negative, got {}", e.violation)));
                }
                Ok(Individual { genome, objectives: e.objectives, violation: e.violation })
            })
            .collect()
    }

    pub fn initial_population(&mut self) -> Result<Population<T>> {
        let genomes = (0..self.config.pop_size).map(|_| self.problem.initial_genome(&mut self.rng)).collect();
        Ok(Population { members: self.evaluate(genomes)?, generation: 0 })
    }

    /// Runs the configured number of generations, calling `observe` after each.
    pub fn run(mut self, mut observe: impl FnMut(&GenerationStats<T>)) -> Result<EvolutionOutcome<T>> {
        let initial = self.initial_population()?;
        let mut population = initial.clone();
        let mut stats = Vec::with_capacity(self.config.generations);
        let genes = T::of_usize(self.layout.genes());
        let params = VariationParams {
            crossover_prob: self.config.crossover_prob,
            mutation_prob: self.config.mutation_prob.unwrap_or_else(|| T::one() / genes),
            crossover_eta: self.config.distribution_index,
            mutation_eta: self.config.distribution_index,
        };
        for generation in 1..=self.config.generations {
            let parents: Vec<Genome<T>> = population.members.iter().map(|m| m.genome.clone()).collect();
            let children = variation(&parents, &self.layout, &params, &mut self.rng);
            let mut merged = std::mem::take(&mut population.members);
            merged.extend(self.evaluate(children)?);
            debug_assert_eq!(merged.len(), 2 * self.config.pop_size);
            let (members, comparisons, first_front) = self.select(merged)?;
            population = Population { members, generation };
            let s = summarize(&population, comparisons, first_front);
            observe(&s);
            stats.push(s);
        }
        Ok(EvolutionOutcome { initial, final_population: population, stats })
    }

    /// Environmental selection of `pop_size` members out of the merged population. Exact
    /// genome duplicates compete only for slots the distinct members cannot fill.
    fn select(&mut self, merged: Vec<Individual<T>>) -> Result<(Vec<Individual<T>>, u64, usize)> {
        let n = self.config.pop_size;
        let mut seen = HashSet::new();
        let (mut unique, mut duplicates) = (Vec::new(), Vec::new());
        for (i, ind) in merged.iter().enumerate() {
            if seen.insert(ind.genome.key()) {
                unique.push(i);
            } else {
                duplicates.push(i);
            }
        }
        let member_keys: Vec<u64> = (0..merged.len()).map(|_| self.rng.next_u64()).collect();
        let reference_keys: Vec<u64> = (0..self.references.len()).map(|_| self.rng.next_u64()).collect();

        let mut chosen = Vec::with_capacity(n);
        let mut comparisons = 0;
        let mut first_front = 0;
        for (round, group) in [unique, duplicates].into_iter().enumerate() {
            let slots = n - chosen.len();
            if slots == 0 || group.is_empty() {
                continue;
            }
            let (picked, count, front0) = self.select_from(&merged, &group, slots, &member_keys, &reference_keys)?;
            if round == 0 {
                comparisons = count;
                first_front = front0;
            }
            chosen.extend(picked);
        }
        let mut slots: Vec<Option<Individual<T>>> = merged.into_iter().map(Some).collect();
        let members = chosen.into_iter().map(|i| slots[i].take().expect("selected once")).collect();
        Ok((members, comparisons, first_front))
    }

    fn select_from(
        &self,
        merged: &[Individual<T>],
        group: &[usize],
        slots: usize,
        member_keys: &[u64],
        reference_keys: &[u64],
    ) -> Result<(Vec<usize>, u64, usize)> {
        if group.len() <= slots {
            return Ok((group.to_vec(), 0, group.len()));
        }
        let objectives: Vec<Vec<T>> = group.iter().map(|&i| merged[i].objectives.clone()).collect();
        let violations: Vec<T> = group.iter().map(|&i| merged[i].violation).collect();
        let relation = PreparedDominance::new(&objectives, &violations, self.dominance)?;
        let fronts = non_dominated_sort(&relation)?;
        let comparisons = relation.comparisons();
        let first_front = fronts.first().map_or(0, Vec::len);

        let mut selected = Vec::with_capacity(slots);
        for front in &fronts {
            if selected.len() + front.len() <= slots {
                selected.extend(front.iter().copied());
                if selected.len() == slots {
                    break;
                }
                continue;
            }
            let keys: Vec<u64> = group.iter().map(|&i| member_keys[i]).collect();
            let extra = associate_and_niche(&objectives, &selected, front, &self.references.points, slots - selected.len(), &keys, reference_keys);
            selected.extend(extra);
            break;
        }
        Ok((selected.into_iter().map(|k| group[k]).collect(), comparisons, first_front))
    }
}

fn summarize<T: Scalar>(pop: &Population<T>, comparisons: u64, first_front: usize) -> GenerationStats<T> {
    let m = pop.members.first().map_or(0, |i| i.objectives.len());
    let mut ideal = vec![T::infinity(); m];
    for ind in &pop.members {
        for (lo, &v) in ideal.iter_mut().zip(&ind.objectives) {
            *lo = lo.min(v);
        }
    }
    let total: T = pop.members.iter().map(|i| i.violation).sum();
    GenerationStats {
        generation: pop.generation,
        ideal,
        feasible: pop.members.iter().filter(|i| i.is_feasible()).count(),
        first_front,
        mean_violation: if pop.members.is_empty() { T::zero() } else { total / T::of_usize(pop.members.len()) },
        comparisons,
    }
}

/// Evolves `problem` from a seeded random start and returns the initial and final populations.
pub fn evolve<T: Scalar, P: Problem<T> + ?Sized>(
    problem: &P,
    config: &EvolutionConfig<T>,
    dominance: &DominanceConfig<T>,
) -> Result<EvolutionOutcome<T>> {
    Evolver::new(problem, config.clone(), *dominance)?.run(|_| {})
}
