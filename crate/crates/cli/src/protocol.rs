use std::time::{Duration, Instant};

use anyhow::{bail, Result};
use cpnshare_pseudonym::{certificate_check, generate_pseudonym, identity_verify, Authority, Credential, Device, OpCounter, OpCounts, Params, Phase};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::output::{fmt_f64, Table};

#[derive(Debug, Clone, PartialEq)]
pub struct PhaseRow {
    pub phase: Phase,
    pub counts: OpCounts,
    pub mean_ms: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ProtocolReport {
    pub config_hash: String,
    pub seed: u64,
    pub iterations: usize,
    pub phases: Vec<PhaseRow>,
}

struct Iteration {
    counts: Vec<OpCounts>,
    times: [Duration; 3],
}

fn lifecycle(rng: &mut ChaCha20Rng) -> Result<Iteration> {
    let mut ctr = OpCounter::new();
    let start = Instant::now();
    let authority = Authority::setup(Params::p256(128)?, rng, &mut ctr);
    let mut device = Device::new("bench-device", authority.params(), rng, &mut ctr);
    device.register(&authority, rng, &mut ctr)?;
    let (pseudonym, transcript) = generate_pseudonym(&authority, &device, rng, &mut ctr)?;
    let t_pseudonym = start.elapsed();

    let start = Instant::now();
    let certificate = authority.issue_certificate(&pseudonym, rng, &mut ctr)?;
    certificate_check(authority.params(), &pseudonym, &certificate, authority.public_key(), &mut ctr)?;
    let t_certificate = start.elapsed();

    let credential = Credential { pseudonym, transcript, certificate };
    let start = Instant::now();
    identity_verify(authority.params(), &credential, authority.public_key(), &mut ctr)?;
    let t_verify = start.elapsed();

    Ok(Iteration { counts: Phase::ALL.iter().map(|&p| ctr.get(p)).collect(), times: [t_pseudonym, t_certificate, t_verify] })
}

/// Runs `iterations` full lifecycles and fails if any phase's operation counts differ
/// between iterations. Pseudonym-phase time includes identity-record signing.
pub fn run_protocol_bench(iterations: usize, seed: u64, config_hash: String) -> Result<ProtocolReport> {
    if iterations == 0 {
        bail!("at least one iteration is required");
    }
    let mut rng = ChaCha20Rng::seed_from_u64(seed);
    let mut counts: Option<Vec<OpCounts>> = None;
    let mut totals = [Duration::ZERO; 3];
    for i in 0..iterations {
        let it = lifecycle(&mut rng)?;
        match &counts {
            Some(c) if *c != it.counts => bail!("operation counts changed in iteration {i}: {:?} vs {:?}", it.counts, c),
            Some(_) => {}
            None => counts = Some(it.counts.clone()),
        }
        for (t, d) in totals.iter_mut().zip(it.times) {
            *t += d;
        }
    }
    let counts = counts.expect("at least one iteration");
    let phases = Phase::ALL
        .iter()
        .zip(counts)
        .map(|(&phase, counts)| {
            let mean_ms = Phase::PROTOCOL.iter().position(|&p| p == phase).map_or(f64::NAN, |i| totals[i].as_secs_f64() * 1e3 / iterations as f64);
            PhaseRow { phase, counts, mean_ms }
        })
        .collect();
    Ok(ProtocolReport { config_hash, seed, iterations, phases })
}

impl ProtocolReport {
    pub fn counts(&self, phase: Phase) -> Option<OpCounts> {
        self.phases.iter().find(|r| r.phase == phase).map(|r| r.counts)
    }

    pub fn table(&self) -> Table {
        let header = ["config_hash", "seed", "phase", "point_mults", "point_adds", "hashes", "iterations", "mean_ms"].map(String::from).to_vec();
        let mut t = Table::new(header);
        for r in &self.phases {
            t.push(vec![
                self.config_hash.clone(),
                self.seed.to_string(),
                r.phase.name().to_string(),
                r.counts.point_mults.to_string(),
                r.counts.point_adds.to_string(),
                r.counts.hashes.to_string(),
                self.iterations.to_string(),
                if r.mean_ms.is_nan() { String::new() } else { fmt_f64(r.mean_ms) },
            ]);
        }
        t
    }
}
