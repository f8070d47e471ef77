use anyhow::{Context, Result};
use cpnshare_core::benchmarks::{igd, pd, BenchmarkKind, BenchmarkProblem};
use cpnshare_core::moea::evolve;

use crate::config::{Algorithm, ExperimentConfig};
use crate::output::{fmt_f64, Table};
use crate::stats::median;

#[derive(Debug, Clone, PartialEq)]
pub struct BenchRun {
    pub problem: BenchmarkKind,
    pub m: usize,
    pub algorithm: Algorithm,
    pub run: usize,
    pub seed: u64,
    pub igd: f64,
    pub pd: f64,
}

/// Median IGD/PD of one algorithm on one problem, with verdicts against the last-listed
/// algorithm: `+` better, `-` worse, `=` equal. The reference algorithm has no verdict.
#[derive(Debug, Clone, PartialEq)]
pub struct BenchSummary {
    pub problem: BenchmarkKind,
    pub m: usize,
    pub algorithm: Algorithm,
    pub igd: f64,
    pub pd: f64,
    pub igd_verdict: Option<char>,
    pub pd_verdict: Option<char>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct BenchReport {
    pub config_hash: String,
    pub runs: Vec<BenchRun>,
    pub summaries: Vec<BenchSummary>,
}

fn verdict(value: f64, reference: f64, lower_is_better: bool) -> char {
    if value == reference {
        '='
    } else if (value < reference) == lower_is_better {
        '+'
    } else {
        '-'
    }
}

pub fn run_benchmarks(cfg: &ExperimentConfig) -> Result<BenchReport> {
    cfg.validate()?;
    let b = &cfg.benchmark;
    let mut runs = Vec::new();
    let mut summaries = Vec::new();
    for &kind in &b.problems {
        for &m in &b.objectives {
            let problem = BenchmarkProblem::<f64>::new(kind, m)?;
            let reference = problem.sample_true_front(b.reference_samples)?;
            let mut medians = Vec::new();
            for &algorithm in &cfg.algorithms {
                let mut igds = Vec::new();
                let mut pds = Vec::new();
                for run in 0..cfg.runs {
                    let seed = cfg.seed.wrapping_add(run as u64);
                    let outcome = evolve(&problem, &cfg.evolution(b.pop_size, b.generations, seed), &cfg.dominance(algorithm))
                        .with_context(|| format!("{algorithm} on {kind} (M={m}) run {run}"))?;
                    let front = outcome.final_population.objectives();
                    let r = BenchRun { problem: kind, m, algorithm, run, seed, igd: igd(&front, &reference)?, pd: pd(&front) };
                    igds.push(r.igd);
                    pds.push(r.pd);
                    runs.push(r);
                }
                medians.push((algorithm, median(&igds), median(&pds)));
            }
            let &(last, ref_igd, ref_pd) = medians.last().expect("at least one algorithm");
            for (algorithm, igd_med, pd_med) in medians {
                let judged = algorithm != last;
                summaries.push(BenchSummary {
                    problem: kind,
                    m,
                    algorithm,
                    igd: igd_med,
                    pd: pd_med,
                    igd_verdict: judged.then(|| verdict(igd_med, ref_igd, true)),
                    pd_verdict: judged.then(|| verdict(pd_med, ref_pd, false)),
                });
            }
        }
    }
    Ok(BenchReport { config_hash: cfg.hash(), runs, summaries })
}

impl BenchReport {
    /// Per-run rows followed by `median` rows carrying the verdicts.
    pub fn table(&self) -> Table {
        let header = ["config_hash", "seed", "problem", "m", "algorithm", "run", "igd", "pd", "igd_verdict", "pd_verdict"].map(String::from).to_vec();
        let mut t = Table::new(header);
        for r in &self.runs {
            t.push(vec![
                self.config_hash.clone(),
                r.seed.to_string(),
                r.problem.to_string(),
                r.m.to_string(),
                r.algorithm.to_string(),
                r.run.to_string(),
                fmt_f64(r.igd),
                fmt_f64(r.pd),
                String::new(),
                String::new(),
            ]);
        }
        let base_seed = self.runs.first().map_or(0, |r| r.seed);
        for s in &self.summaries {
            let v = |c: Option<char>| c.map(String::from).unwrap_or_default();
            t.push(vec![
                self.config_hash.clone(),
                base_seed.to_string(),
                s.problem.to_string(),
                s.m.to_string(),
                s.algorithm.to_string(),
                "median".into(),
                fmt_f64(s.igd),
                fmt_f64(s.pd),
                v(s.igd_verdict),
                v(s.pd_verdict),
            ]);
        }
        t
    }

    pub fn summary(&self, problem: BenchmarkKind, m: usize, algorithm: Algorithm) -> Option<&BenchSummary> {
        self.summaries.iter().find(|s| s.problem == problem && s.m == m && s.algorithm == algorithm)
    }
}
