use std::path::PathBuf;
use std::process::ExitCode;

use anyhow::{Context, Result};
use clap::{Args, Parser, Subcommand};
use cpnshare_cli::{run_allocation, run_benchmarks, run_protocol_bench, run_trade_demo, verify_ledger, Algorithm, ExperimentConfig, TradeOptions};
use cpnshare_core::cpn::{GeneratorConfig, ObjectiveVector, Scenario};
use cpnshare_ledger::Validity;

#[derive(Parser)]
#[command(name = "cpnshare", version, about = "Resource allocation, pseudonym protocol and ledger experiments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone)]
struct Common {
    /// Experiment config (JSON); missing fields use defaults.
    #[arg(long)]
    config: Option<PathBuf>,
    #[arg(long)]
    seed: Option<u64>,
    #[arg(long)]
    runs: Option<usize>,
    /// Comma-separated: nsga3, nsga3-sdr, nsga3-kdr.
    #[arg(long, value_delimiter = ',')]
    algo: Vec<Algorithm>,
    /// Output file; stdout when omitted.
    #[arg(long)]
    out: Option<PathBuf>,
}

impl Common {
    fn load(&self) -> Result<ExperimentConfig> {
        let mut cfg = match &self.config {
            Some(p) => ExperimentConfig::load(p)?,
            None => ExperimentConfig::default(),
        };
        if let Some(s) = self.seed {
            cfg.seed = s;
        }
        if let Some(r) = self.runs {
            cfg.runs = r;
        }
        if !self.algo.is_empty() {
            cfg.algorithms = self.algo.clone();
        }
        if self.out.is_some() {
            cfg.output = self.out.clone();
        }
        cfg.validate()?;
        Ok(cfg)
    }
}

#[derive(Subcommand)]
enum Command {
    /// Evolve allocations and report per-run objective statistics and improvement rates.
    Allocate(Common),
    /// Compare algorithms on DTLZ/SDTLZ problems by IGD and PD.
    BenchMoea(Common),
    /// Count group operations and time each protocol phase (--runs sets iterations).
    BenchProtocol(Common),
    /// Register two devices, match a task, trade and record it on a ledger (--out: ledger file).
    TradeDemo {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        tamper_certificate: bool,
        /// Deterministic randomness and timestamps.
        #[arg(long)]
        test_mode: bool,
    },
    /// Validate a ledger file.
    LedgerVerify {
        path: PathBuf,
        /// Hex-encoded writer key; defaults to the genesis writer.
        #[arg(long)]
        writer: Vec<String>,
        /// Also export the chain as JSON to this file.
        #[arg(long)]
        json: Option<PathBuf>,
    },
    /// Generate a synthetic scenario as JSON.
    Scenario {
        #[command(flatten)]
        common: Common,
        /// The 60/40/20-device network instead of the full one.
        #[arg(long)]
        reduced: bool,
    },
}

fn run(cli: Cli) -> Result<ExitCode> {
    match cli.command {
        Command::Allocate(c) => {
            let cfg = c.load()?;
            let report = run_allocation(&cfg)?;
            report.table().emit(cfg.output.as_deref())?;
            for &a in &cfg.algorithms {
                let irs: Vec<String> = ObjectiveVector::<f64>::NAMES
                    .iter()
                    .enumerate()
                    .map(|(k, n)| format!("{n} {:+.4}", report.median_ir(a, k).unwrap_or(f64::NAN)))
                    .collect();
                eprintln!("{a}: median improvement rates: {}", irs.join(", "));
            }
        }
        Command::BenchMoea(c) => {
            let cfg = c.load()?;
            run_benchmarks(&cfg)?.table().emit(cfg.output.as_deref())?;
        }
        Command::BenchProtocol(c) => {
            let mut cfg = c.load()?;
            if let Some(r) = c.runs {
                cfg.protocol_iterations = r;
            }
            run_protocol_bench(cfg.protocol_iterations, cfg.seed, cfg.hash())?.table().emit(cfg.output.as_deref())?;
        }
        Command::TradeDemo { common, tamper_certificate, test_mode } => {
            let cfg = common.load()?;
            let demo = run_trade_demo(&cfg, &TradeOptions { test_mode, tamper_certificate })?;
            for line in &demo.trace {
                println!("{line}");
            }
            if let Some(p) = &cfg.output {
                demo.ledger.save(p)?;
                println!("ledger written to {}", p.display());
            }
        }
        Command::LedgerVerify { path, writer, json } => {
            let (ledger, validity) = verify_ledger(&path, &writer)?;
            if let Some(p) = json {
                std::fs::write(&p, ledger.export_json()?).with_context(|| format!("writing {}", p.display()))?;
            }
            match validity {
                Validity::Valid => println!("valid: {} blocks", ledger.len()),
                Validity::Invalid { height, reason } => {
                    println!("invalid at height {height}: {reason}");
                    return Ok(ExitCode::FAILURE);
                }
            }
        }
        Command::Scenario { common, reduced } => {
            let cfg = common.load()?;
            let generator = if reduced { GeneratorConfig::reduced() } else { cfg.generator.clone() };
            let scenario: Scenario<f64> = generator.generate(cfg.seed);
            let json = scenario.to_json();
            match &cfg.output {
                Some(p) => std::fs::write(p, json).with_context(|| format!("writing {}", p.display()))?,
                None => println!("{json}"),
            }
        }
    }
    Ok(ExitCode::SUCCESS)
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::FAILURE
        }
    }
}
