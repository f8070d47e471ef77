//! Experiment harness: allocation runs, benchmark comparisons, protocol cost measurement,
//! an end-to-end trade walkthrough and ledger checks. `main.rs` is a thin clap front end.

pub mod allocate;
pub mod bench;
pub mod config;
pub mod output;
pub mod protocol;
pub mod stats;
pub mod trade;

use std::path::Path;

use anyhow::{Context, Result};
use cpnshare_ledger::{Block, Ledger, Validity, WriterRegistry};
use cpnshare_pseudonym::{Group, P256};

pub use allocate::{run_allocation, AllocationReport};
pub use bench::{run_benchmarks, BenchReport};
pub use config::{Algorithm, BenchmarkConfig, ExperimentConfig};
pub use protocol::{run_protocol_bench, ProtocolReport};
pub use trade::{run_trade_demo, TradeDemo, TradeOptions};

/// Loads a ledger file and validates it. Writers are the given hex-encoded keys, or the
/// genesis block's writer when none are given.
pub fn verify_ledger(path: &Path, writers: &[String]) -> Result<(Ledger, Validity)> {
    let bytes = std::fs::read(path).with_context(|| format!("reading {}", path.display()))?;
    let mut registry = WriterRegistry::new();
    if writers.is_empty() {
        let unchecked = Ledger::from_bytes(&bytes, WriterRegistry::new())?;
        let genesis: &Block = unchecked.blocks().first().context("ledger has no blocks")?;
        registry.register(&genesis.writer);
    } else {
        for w in writers {
            let raw = hex::decode(w).with_context(|| format!("writer key {w:?} is not hex"))?;
            registry.register(&P256.decode_element(&raw).with_context(|| format!("writer key {w:?} is not a P-256 point"))?);
        }
    }
    let ledger = Ledger::from_bytes(&bytes, registry)?;
    let validity = ledger.validate();
    Ok((ledger, validity))
}
