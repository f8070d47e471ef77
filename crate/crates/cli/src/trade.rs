use std::time::{SystemTime, UNIX_EPOCH};

use anyhow::{anyhow, bail, Context, Result};
use cpnshare_core::cpn::{CpnModel, CpnProblem, Layer, ObjectiveVector, Scenario};
use cpnshare_core::moea::evolve;
use cpnshare_core::topsis::{select, DecisionMatrix};
use cpnshare_ledger::{Entry, Ledger, ResourceUpdate, TaskSummary, TradeRecord, WriterRegistry};
use cpnshare_pseudonym::{enroll, identity_verify, Authority, Credential, Device, Group, OpCounter, Params, P256};
use rand::SeedableRng;
use rand_chacha::ChaCha20Rng;

use crate::config::{Algorithm, ExperimentConfig};

#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct TradeOptions {
    /// Seed every random choice from the config seed and use timestamp 0.
    pub test_mode: bool,
    /// Corrupt the provider's certificate before the peers verify each other.
    pub tamper_certificate: bool,
}

#[derive(Debug)]
pub struct TradeDemo {
    pub trace: Vec<String>,
    pub trade: TradeRecord,
    pub ledger: Ledger,
}

/// Hex of the compressed pseudonym point, used as the public name on the ledger.
pub fn pseudonym_name(credential: &Credential<P256>) -> String {
    let mut out = Vec::new();
    P256.encode_element(&credential.pseudonym.x, &mut out);
    hex::encode(out)
}

struct Match {
    requester: usize,
    provider: usize,
    task: usize,
    requester_on: bool,
}

/// Short evolutionary run plus TOPSIS; task 0 goes to the best-capacity device of its most
/// probable layer.
fn find_match(cfg: &ExperimentConfig, scenario: &Scenario<f64>, trace: &mut Vec<String>) -> Result<Match> {
    let model = CpnModel::new(scenario.clone())?;
    let problem = CpnProblem::new(model).with_initial_occupancy(cfg.initial_occupancy);
    let pop_size = (cfg.pop_size.min(28) / 2 * 2).max(4);
    let generations = cfg.generations.min(20);
    let algorithm = cfg.algorithms.last().copied().unwrap_or(Algorithm::Nsga3Kdr);
    let outcome = evolve(&problem, &cfg.evolution(pop_size, generations, cfg.seed), &cfg.dominance(algorithm))?;
    let members = &outcome.final_population.members;
    let rows = members.iter().map(|m| Ok(ObjectiveVector::from_canonical(&m.objectives)?.raw().to_vec())).collect::<Result<Vec<_>>>()?;
    let pick = if rows.len() > 1 { select(&DecisionMatrix::new(rows, ObjectiveVector::<f64>::BENEFIT.to_vec())?)?.1.best() } else { 0 };
    let decision = problem.decision(&members[pick].genome);
    trace.push(format!("match: {algorithm} ({pop_size} x {generations}) selected member {pick}, feasible = {}", members[pick].is_feasible()));

    let task = 0;
    let t = scenario.tasks.first().ok_or_else(|| anyhow!("scenario has no tasks"))?;
    let requester = scenario.device_index(&t.source_device).ok_or_else(|| anyhow!("unknown source device {}", t.source_device))?;
    let probs = decision.layer_probs[task];
    let layer = Layer::ALL.into_iter().max_by(|a, b| probs[a.index()].total_cmp(&probs[b.index()])).expect("three layers");
    let candidates: Vec<usize> = (0..scenario.devices.len()).filter(|&i| i != requester && scenario.devices[i].layer == layer).collect();
    let occupied: Vec<usize> = candidates.iter().copied().filter(|&i| decision.occupancy[i]).collect();
    let pool = if occupied.is_empty() { &candidates } else { &occupied };
    let provider = pool
        .iter()
        .copied()
        .max_by(|&a, &b| scenario.devices[a].capacity_hz.total_cmp(&scenario.devices[b].capacity_hz))
        .ok_or_else(|| anyhow!("no provider available in layer {layer:?}"))?;
    Ok(Match { requester, provider, task, requester_on: decision.occupancy[requester] })
}

pub fn run_trade_demo(cfg: &ExperimentConfig, options: &TradeOptions) -> Result<TradeDemo> {
    cfg.validate()?;
    let mut trace = Vec::new();
    let mut rng = if options.test_mode { ChaCha20Rng::seed_from_u64(cfg.seed) } else { ChaCha20Rng::from_entropy() };
    let mut ctr = OpCounter::new();

    let scenario = cfg.load_scenario()?;
    let m = find_match(cfg, &scenario, &mut trace).context("matching phase")?;
    let (req_dev, prov_dev) = (&scenario.devices[m.requester], &scenario.devices[m.provider]);
    let task = &scenario.tasks[m.task];

    let authority = Authority::setup(Params::p256(128)?, &mut rng, &mut ctr);
    let mut ledger = Ledger::genesis(&authority, WriterRegistry::new(), &mut rng);
    trace.push("setup: authority keys generated, genesis block written".into());

    let mut requester = Device::new(req_dev.id.clone(), authority.params(), &mut rng, &mut ctr);
    let mut provider = Device::new(prov_dev.id.clone(), authority.params(), &mut rng, &mut ctr);
    for d in [&mut requester, &mut provider] {
        d.register(&authority, &mut rng, &mut ctr).with_context(|| format!("registration phase: {}", d.identity()))?;
    }
    trace.push(format!("registration: {} and {} registered", req_dev.id, prov_dev.id));

    let req_cred = enroll(&authority, &mut requester, &mut rng, &mut ctr).context("pseudonym phase: requester")?;
    let mut prov_cred = enroll(&authority, &mut provider, &mut rng, &mut ctr).context("pseudonym phase: provider")?;
    let (req_name, prov_name) = (pseudonym_name(&req_cred), pseudonym_name(&prov_cred));
    trace.push(format!("pseudonyms: requester {req_name}, provider {prov_name}"));

    if options.tamper_certificate {
        prov_cred.certificate.p = P256.scalar_add(&prov_cred.certificate.p, &P256.scalar_from_u64(1));
        trace.push("tamper: provider certificate altered".into());
    }
    let issuer = authority.public_key();
    identity_verify(authority.params(), &prov_cred, issuer, &mut ctr)
        .map_err(|e| anyhow!("verification phase: provider credential rejected: {e}"))?;
    identity_verify(authority.params(), &req_cred, issuer, &mut ctr)
        .map_err(|e| anyhow!("verification phase: requester credential rejected: {e}"))?;
    trace.push("verification: both credentials accepted".into());

    let tx = CpnModel::new(scenario.clone())?.transmission_latencies()[m.task];
    let exec = task.cycles / prov_dev.capacity_hz;
    let timestamp = if options.test_mode { 0 } else { SystemTime::now().duration_since(UNIX_EPOCH).map_or(0, |d| d.as_secs()) };
    let trade = TradeRecord {
        requester: req_name.clone(),
        provider: prov_name.clone(),
        task: TaskSummary { cycles: task.cycles, data_kb: task.data_kb, deadline_s: task.deadline_s },
        price: prov_dev.price * exec,
        deadline_met: tx + exec <= task.deadline_s,
        timestamp,
    };
    trace.push(format!("trade: task {} for price {:.6}, deadline met = {}", task.id, trade.price, trade.deadline_met));

    let payload = vec![
        Entry::Trade(trade.clone()),
        Entry::Resource(ResourceUpdate { device: prov_name, occupied: true, capacity_hz: prov_dev.capacity_hz }),
        Entry::Resource(ResourceUpdate { device: req_name, occupied: m.requester_on, capacity_hz: req_dev.capacity_hz }),
    ];
    let height = ledger.append_block(payload, &authority, &mut rng)?.height;
    if !ledger.validate().is_valid() {
        bail!("ledger failed validation after append: {:?}", ledger.validate());
    }
    trace.push(format!("ledger: block {height} appended, chain of {} blocks valid", ledger.len()));
    Ok(TradeDemo { trace, trade, ledger })
}
