use std::fmt;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use anyhow::{bail, Context, Result};
use cpnshare_core::benchmarks::BenchmarkKind;
use cpnshare_core::cpn::{GeneratorConfig, Scenario};
use cpnshare_core::moea::{DominanceConfig, EvolutionConfig, Relation};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Algorithm {
    #[serde(rename = "nsga3")]
    Nsga3,
    #[serde(rename = "nsga3-sdr")]
    Nsga3Sdr,
    #[serde(rename = "nsga3-kdr")]
    Nsga3Kdr,
}

impl Algorithm {
    pub fn relation(self) -> Relation {
        match self {
            Algorithm::Nsga3 => Relation::Pareto,
            Algorithm::Nsga3Sdr => Relation::Sdr,
            Algorithm::Nsga3Kdr => Relation::Kdr,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Algorithm::Nsga3 => "nsga3",
            Algorithm::Nsga3Sdr => "nsga3-sdr",
            Algorithm::Nsga3Kdr => "nsga3-kdr",
        }
    }
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Algorithm {
    type Err = anyhow::Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "nsga3" => Ok(Algorithm::Nsga3),
            "nsga3-sdr" => Ok(Algorithm::Nsga3Sdr),
            "nsga3-kdr" => Ok(Algorithm::Nsga3Kdr),
            _ => bail!("unknown algorithm {s:?} (expected nsga3, nsga3-sdr or nsga3-kdr)"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchmarkConfig {
    pub problems: Vec<BenchmarkKind>,
    pub objectives: Vec<usize>,
    pub pop_size: usize,
    pub generations: usize,
    /// Upper bound on the true-front sample used as the IGD reference.
    pub reference_samples: usize,
}

impl Default for BenchmarkConfig {
    fn default() -> Self {
        Self {
            problems: vec![BenchmarkKind::Dtlz2, BenchmarkKind::Sdtlz2],
            objectives: vec![5],
            pop_size: 210,
            generations: 300,
            reference_samples: 5000,
        }
    }
}

/// Everything a command needs. Missing JSON fields take these defaults.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    /// Scenario JSON file; when absent the scenario is generated from `generator` and `seed`.
    pub scenario: Option<PathBuf>,
    pub generator: GeneratorConfig,
    pub algorithms: Vec<Algorithm>,
    pub pop_size: usize,
    pub generations: usize,
    /// Run r uses evolution seed `seed + r`; the generated scenario uses `seed`.
    pub seed: u64,
    pub runs: usize,
    pub crossover_prob: f64,
    pub mutation_prob: Option<f64>,
    pub distribution_index: f64,
    pub sigma: f64,
    pub initial_occupancy: f64,
    pub benchmark: BenchmarkConfig,
    pub protocol_iterations: usize,
    pub output: Option<PathBuf>,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            scenario: None,
            generator: GeneratorConfig::default(),
            algorithms: vec![Algorithm::Nsga3, Algorithm::Nsga3Kdr],
            pop_size: 126,
            generations: 300,
            seed: 1,
            runs: 11,
            crossover_prob: 1.0,
            mutation_prob: None,
            distribution_index: 20.0,
            sigma: 1.0,
            initial_occupancy: 0.5,
            benchmark: BenchmarkConfig::default(),
            protocol_iterations: 20,
            output: None,
        }
    }
}

impl ExperimentConfig {
    pub fn load(path: &Path) -> Result<Self> {
        let text = std::fs::read_to_string(path).with_context(|| format!("reading config {}", path.display()))?;
        let cfg: Self = serde_json::from_str(&text).with_context(|| format!("parsing config {}", path.display()))?;
        cfg.validate()?;
        Ok(cfg)
    }

    pub fn validate(&self) -> Result<()> {
        if self.runs == 0 {
            bail!("runs must be at least 1");
        }
        if self.algorithms.is_empty() {
            bail!("at least one algorithm is required");
        }
        if !(0.0..=1.0).contains(&self.initial_occupancy) {
            bail!("initial_occupancy must lie in [0, 1]");
        }
        if self.protocol_iterations == 0 {
            bail!("protocol_iterations must be at least 1");
        }
        Ok(())
    }

    /// First 16 hex digits of SHA-256 over the config's JSON form.
    pub fn hash(&self) -> String {
        let json = serde_json::to_string(self).expect("config serializes");
        hex::encode(&Sha256::digest(json.as_bytes())[..8])
    }

    pub fn load_scenario(&self) -> Result<Scenario<f64>> {
        match &self.scenario {
            Some(path) => {
                let text = std::fs::read_to_string(path).with_context(|| format!("reading scenario {}", path.display()))?;
                Scenario::from_json(&text).with_context(|| format!("loading scenario {}", path.display()))
            }
            None => {
                let s: Scenario<f64> = self.generator.generate(self.seed);
                s.validate().context("generated scenario is invalid")?;
                Ok(s)
            }
        }
    }

    pub fn evolution(&self, pop_size: usize, generations: usize, seed: u64) -> EvolutionConfig<f64> {
        let mut e = EvolutionConfig::new(pop_size, generations, seed);
        e.crossover_prob = self.crossover_prob;
        e.mutation_prob = self.mutation_prob;
        e.distribution_index = self.distribution_index;
        e
    }

    pub fn dominance(&self, algorithm: Algorithm) -> DominanceConfig<f64> {
        let mut d = DominanceConfig::new(algorithm.relation());
        d.sigma = self.sigma;
        d
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_round_trip_through_json() {
        let cfg = ExperimentConfig::default();
        let back: ExperimentConfig = serde_json::from_str(&serde_json::to_string(&cfg).unwrap()).unwrap();
        assert_eq!(back, cfg);
        assert_eq!(back.hash(), cfg.hash());
        assert_eq!(cfg.hash().len(), 16);
    }

    #[test]
    fn partial_json_fills_defaults() {
        let cfg: ExperimentConfig = serde_json::from_str(r#"{"runs": 3, "algorithms": ["nsga3-sdr"]}"#).unwrap();
        assert_eq!(cfg.runs, 3);
        assert_eq!(cfg.algorithms, vec![Algorithm::Nsga3Sdr]);
        assert_eq!(cfg.pop_size, 126);
        assert!(serde_json::from_str::<ExperimentConfig>(r#"{"runz": 3}"#).is_err());
    }

    #[test]
    fn hash_tracks_content() {
        let a = ExperimentConfig::default();
        let mut b = a.clone();
        b.generations += 1;
        assert_ne!(a.hash(), b.hash());
    }

    #[test]
    fn algorithm_names_parse() {
        for a in [Algorithm::Nsga3, Algorithm::Nsga3Sdr, Algorithm::Nsga3Kdr] {
            assert_eq!(a.name().parse::<Algorithm>().unwrap(), a);
        }
        assert!("moead".parse::<Algorithm>().is_err());
    }
}
