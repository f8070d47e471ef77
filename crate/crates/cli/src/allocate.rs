use anyhow::{bail, Context, Result};
use cpnshare_core::cpn::{CpnModel, CpnProblem, ObjectiveVector};
use cpnshare_core::moea::{evolve, Population};
use cpnshare_core::topsis::{select, DecisionMatrix};

use crate::config::{Algorithm, ExperimentConfig};
use crate::output::{fmt_f64, Table};
use crate::stats::{improvement_rate, median, quantile};

/// Summary of one objective over one run.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ObjectiveSummary {
    pub initial_median: f64,
    pub initial_topsis: f64,
    pub final_q1: f64,
    pub final_median: f64,
    pub final_q3: f64,
    /// Best final value in the objective's own direction.
    pub final_best: f64,
    pub final_topsis: f64,
}

impl ObjectiveSummary {
    pub fn ir_median(&self) -> f64 {
        improvement_rate(self.initial_median, self.final_median)
    }

    pub fn ir_topsis(&self) -> f64 {
        improvement_rate(self.initial_topsis, self.final_topsis)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct AllocationRun {
    pub algorithm: Algorithm,
    pub run: usize,
    pub seed: u64,
    pub initial_feasible: usize,
    pub final_feasible: usize,
    pub objectives: [ObjectiveSummary; 6],
}

#[derive(Debug, Clone, PartialEq)]
pub struct AllocationReport {
    pub config_hash: String,
    pub runs: Vec<AllocationRun>,
}

fn raw_objectives(pop: &Population<f64>) -> Result<Vec<[f64; 6]>> {
    pop.members.iter().map(|m| Ok(ObjectiveVector::from_canonical(&m.objectives)?.raw())).collect()
}

/// TOPSIS pick among the feasible members, or among all members when none is feasible.
fn topsis_pick(pop: &Population<f64>, raw: &[[f64; 6]]) -> Result<usize> {
    let feasible: Vec<usize> = (0..pop.len()).filter(|&i| pop.members[i].is_feasible()).collect();
    let pool = if feasible.is_empty() { (0..pop.len()).collect() } else { feasible };
    if pool.len() == 1 {
        return Ok(pool[0]);
    }
    let matrix = DecisionMatrix::new(pool.iter().map(|&i| raw[i].to_vec()).collect(), ObjectiveVector::<f64>::BENEFIT.to_vec())?;
    let (_, ranking) = select(&matrix)?;
    Ok(pool[ranking.best()])
}

fn summarize(initial: &Population<f64>, last: &Population<f64>) -> Result<[ObjectiveSummary; 6]> {
    let (ri, rf) = (raw_objectives(initial)?, raw_objectives(last)?);
    let (ti, tf) = (topsis_pick(initial, &ri)?, topsis_pick(last, &rf)?);
    let mut out = [ObjectiveSummary {
        initial_median: 0.0,
        initial_topsis: 0.0,
        final_q1: 0.0,
        final_median: 0.0,
        final_q3: 0.0,
        final_best: 0.0,
        final_topsis: 0.0,
    }; 6];
    for (k, s) in out.iter_mut().enumerate() {
        let init: Vec<f64> = ri.iter().map(|r| r[k]).collect();
        let fin: Vec<f64> = rf.iter().map(|r| r[k]).collect();
        let best = if ObjectiveVector::<f64>::BENEFIT[k] {
            fin.iter().copied().fold(f64::NEG_INFINITY, f64::max)
        } else {
            fin.iter().copied().fold(f64::INFINITY, f64::min)
        };
        *s = ObjectiveSummary {
            initial_median: median(&init),
            initial_topsis: ri[ti][k],
            final_q1: quantile(&fin, 0.25),
            final_median: median(&fin),
            final_q3: quantile(&fin, 0.75),
            final_best: best,
            final_topsis: rf[tf][k],
        };
    }
    Ok(out)
}

/// Runs every configured algorithm `runs` times on one scenario. Run r of every algorithm
/// uses evolution seed `seed + r`, so algorithms start from the same initial population.
pub fn run_allocation(cfg: &ExperimentConfig) -> Result<AllocationReport> {
    cfg.validate()?;
    let scenario = cfg.load_scenario()?;
    let model = CpnModel::new(scenario).context("building the allocation model")?;
    let problem = CpnProblem::new(model).with_initial_occupancy(cfg.initial_occupancy);
    let mut runs = Vec::new();
    for run in 0..cfg.runs {
        let seed = cfg.seed.wrapping_add(run as u64);
        for &algorithm in &cfg.algorithms {
            let outcome = evolve(&problem, &cfg.evolution(cfg.pop_size, cfg.generations, seed), &cfg.dominance(algorithm))
                .with_context(|| format!("{algorithm} run {run}"))?;
            if outcome.final_population.is_empty() {
                bail!("{algorithm} run {run} produced an empty population");
            }
            let count = |p: &Population<f64>| p.members.iter().filter(|m| m.is_feasible()).count();
            runs.push(AllocationRun {
                algorithm,
                run,
                seed,
                initial_feasible: count(&outcome.initial),
                final_feasible: count(&outcome.final_population),
                objectives: summarize(&outcome.initial, &outcome.final_population)?,
            });
        }
    }
    Ok(AllocationReport { config_hash: cfg.hash(), runs })
}

impl AllocationReport {
    pub fn table(&self) -> Table {
        let mut header: Vec<String> = ["config_hash", "seed", "run", "algorithm", "initial_feasible", "final_feasible"].map(String::from).to_vec();
        for name in ObjectiveVector::<f64>::NAMES {
            for col in ["initial_median", "final_q1", "final_median", "final_q3", "final_best", "topsis", "ir_median", "ir_topsis"] {
                header.push(format!("{name}_{col}"));
            }
        }
        let mut t = Table::new(header);
        for r in &self.runs {
            let mut row = vec![
                self.config_hash.clone(),
                r.seed.to_string(),
                r.run.to_string(),
                r.algorithm.to_string(),
                r.initial_feasible.to_string(),
                r.final_feasible.to_string(),
            ];
            for s in &r.objectives {
                row.extend(
                    [s.initial_median, s.final_q1, s.final_median, s.final_q3, s.final_best, s.final_topsis, s.ir_median(), s.ir_topsis()]
                        .map(fmt_f64),
                );
            }
            t.push(row);
        }
        t
    }

    /// Median over runs of the per-run median improvement rate of objective `k`.
    pub fn median_ir(&self, algorithm: Algorithm, k: usize) -> Option<f64> {
        let v: Vec<f64> = self.runs.iter().filter(|r| r.algorithm == algorithm).map(|r| r.objectives[k].ir_median()).collect();
        (!v.is_empty()).then(|| median(&v))
    }
}
