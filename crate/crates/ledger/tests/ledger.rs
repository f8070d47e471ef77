use std::collections::HashMap;

use cpnshare_ledger::*;
use cpnshare_pseudonym::{schnorr, Authority, KeyPair, OpCounter, Params, P256};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn writer(rng: &mut ChaCha8Rng) -> Authority<P256> {
    Authority::setup(Params::p256(128).unwrap(), rng, &mut OpCounter::new())
}

fn update(device: &str, occupied: bool, capacity_hz: f64) -> Entry {
    Entry::Resource(ResourceUpdate { device: device.into(), occupied, capacity_hz })
}

fn trade(i: u64) -> Entry {
    Entry::Trade(TradeRecord {
        requester: format!("req{i}"),
        provider: format!("prov{i}"),
        task: TaskSummary { cycles: 1e9, data_kb: 1500.0, deadline_s: 2.0 },
        price: 0.5 * i as f64,
        deadline_met: i.is_multiple_of(2),
        timestamp: i,
    })
}

fn chain(rng: &mut ChaCha8Rng, blocks: usize) -> (Ledger, Authority<P256>) {
    let w = writer(rng);
    let mut ledger = Ledger::genesis(&w, WriterRegistry::new(), rng);
    for i in 1..blocks as u64 {
        ledger.append_block(vec![trade(i), update(&format!("d{}", i % 3), i % 2 == 1, 1e9 * i as f64)], &w, rng).unwrap();
    }
    (ledger, w)
}

#[test]
fn append_links_blocks() {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (ledger, w) = chain(&mut rng, 3);
    let b = ledger.blocks();
    assert_eq!(b[0].height, 0);
    assert_eq!(b[0].prev_hash, [0; 32]);
    assert_eq!(b[1].height, 1);
    assert_eq!(b[1].prev_hash, b[0].hash());
    assert!(b[2].height > b[1].height);
    let params = Params::new(P256);
    assert!(schnorr::verify(&params, w.public_key(), &b[2].signing_message(), &b[2].signature, &mut OpCounter::new()));
    assert!(ledger.validate().is_valid());
}

#[test]
fn append_rules() {
    let mut rng = ChaCha8Rng::seed_from_u64(2);
    let (mut ledger, w) = chain(&mut rng, 1);
    let stranger = writer(&mut rng);
    assert_eq!(ledger.append_block(vec![trade(1)], &stranger, &mut rng).unwrap_err(), Error::UnregisteredWriter);
    assert_eq!(ledger.append_block(vec![], &w, &mut rng).unwrap_err(), Error::EmptyPayload);
    let mut bad = trade(1);
    if let Entry::Trade(t) = &mut bad {
        t.price = -1.0;
    }
    assert!(matches!(ledger.append_block(vec![bad], &w, &mut rng), Err(Error::InvalidEntry(_))));
    assert!(matches!(ledger.append_block(vec![update("", true, 1.0)], &w, &mut rng), Err(Error::InvalidEntry(_))));
    assert_eq!(ledger.len(), 1);
}

#[test]
fn long_chain_validates() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let (ledger, _) = chain(&mut rng, 100);
    assert_eq!(ledger.validate(), Validity::Valid);
}

#[test]
fn payload_tamper_reports_height() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    let (mut ledger, _) = chain(&mut rng, 12);
    if let Entry::Trade(t) = &mut ledger.blocks_mut()[7].payload[0] {
        t.price += 1.0;
    }
    assert_eq!(ledger.validate(), Validity::Invalid { height: 7, reason: Violation::PayloadHash });
    assert!(matches!(ledger.query_resource_state(), Err(Error::InvalidChain { height: 7, .. })));
}

#[test]
fn resigned_block_with_foreign_key_rejected() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (mut ledger, _) = chain(&mut rng, 5);
    let params = Params::new(P256);
    let rogue = KeyPair::generate(&params, &mut rng, &mut OpCounter::new());
    let b = &mut ledger.blocks_mut()[3];
    b.payload.push(update("d9", true, 5e9));
    b.payload_hash = payload_hash(&b.payload);
    b.writer = *rogue.public();
    b.signature = schnorr::sign(&params, &rogue, &b.signing_message(), &mut rng, &mut OpCounter::new());
    assert_eq!(ledger.validate(), Validity::Invalid { height: 3, reason: Violation::UnregisteredWriter });

    // Keeping the registered writer's key but signing with another key fails the signature.
    let (mut ledger, w) = chain(&mut rng, 5);
    let b = &mut ledger.blocks_mut()[2];
    b.writer = *w.public_key();
    b.signature = schnorr::sign(&params, &rogue, &b.signing_message(), &mut rng, &mut OpCounter::new());
    assert_eq!(ledger.validate(), Validity::Invalid { height: 2, reason: Violation::Signature });
}

#[test]
fn every_single_bit_flip_detected() {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let (ledger, _) = chain(&mut rng, 3);
    let bytes = ledger.to_bytes();
    let writers = ledger.writers().clone();
    assert!(Ledger::from_bytes(&bytes, writers.clone()).unwrap().validate().is_valid());
    for bit in 0..bytes.len() * 8 {
        let mut flipped = bytes.clone();
        flipped[bit / 8] ^= 1 << (bit % 8);
        let detected = match Ledger::from_bytes(&flipped, writers.clone()) {
            Err(_) => true,
            Ok(l) => !l.validate().is_valid(),
        };
        assert!(detected, "bit {bit} undetected");
    }
}

#[test]
fn file_and_json_round_trip() {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let (ledger, _) = chain(&mut rng, 4);
    let dir = std::env::temp_dir().join(format!("cpnshare-ledger-{}", std::process::id()));
    std::fs::create_dir_all(&dir).unwrap();
    let path = dir.join("chain.bin");
    ledger.save(&path).unwrap();
    let loaded = Ledger::load(&path, ledger.writers().clone()).unwrap();
    assert_eq!(loaded.blocks(), ledger.blocks());
    std::fs::remove_dir_all(&dir).unwrap();

    let json: serde_json::Value = serde_json::from_str(&ledger.export_json().unwrap()).unwrap();
    assert_eq!(json.as_array().unwrap().len(), 4);
    assert_eq!(json[1]["prev_hash"], hex::encode(ledger.blocks()[0].hash()));
    assert_eq!(json[1]["payload"][1]["kind"], "resource");
}

#[test]
fn empty_view_without_updates() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let w = writer(&mut rng);
    let mut ledger = Ledger::genesis(&w, WriterRegistry::new(), &mut rng);
    assert!(ledger.query_resource_state().unwrap().is_empty());
    ledger.append_block(vec![trade(1)], &w, &mut rng).unwrap();
    assert!(ledger.query_resource_state().unwrap().is_empty());
    ledger.append_block(vec![update("a", true, 1.0), update("a", false, 2.0)], &w, &mut rng).unwrap();
    let view = ledger.query_resource_state().unwrap();
    assert_eq!(view["a"], ResourceState { occupied: false, capacity_hz: 2.0, height: 2 });
}

fn replay(updates: &[(String, bool, f64)]) -> HashMap<String, (bool, f64)> {
    let mut m = HashMap::new();
    for (d, o, c) in updates {
        m.insert(d.clone(), (*o, *c));
    }
    m
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn view_matches_replay(
        updates in proptest::collection::vec(("[a-e]", any::<bool>(), 0.0f64..1e12), 0..40),
        cuts in proptest::collection::vec(1usize..6, 0..10),
        seed in any::<u64>(),
    ) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let w = writer(&mut rng);
        let mut ledger = Ledger::genesis(&w, WriterRegistry::new(), &mut rng);
        let mut rest = &updates[..];
        let mut cuts = cuts.into_iter().cycle();
        while !rest.is_empty() {
            let n = cuts.next().unwrap_or(rest.len()).min(rest.len());
            let payload = rest[..n].iter().map(|(d, o, c)| update(d, *o, *c)).collect();
            ledger.append_block(payload, &w, &mut rng).unwrap();
            rest = &rest[n..];
        }
        let view = ledger.query_resource_state().unwrap();
        let oracle = replay(&updates);
        prop_assert_eq!(view.len(), oracle.len());
        for (d, (o, c)) in oracle {
            prop_assert_eq!((view[&d].occupied, view[&d].capacity_hz), (o, c));
        }
    }
}

#[test]
fn block_decoding_is_strict() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let (ledger, _) = chain(&mut rng, 2);
    let b = ledger.blocks()[1].to_bytes();
    assert_eq!(Block::from_bytes(&b).unwrap(), ledger.blocks()[1]);
    let mut extra = b.clone();
    extra.push(0);
    assert!(Block::from_bytes(&extra).is_err());
    let i = rng.gen_range(0..b.len() - 1);
    assert!(Block::from_bytes(&b[..i]).is_err());
}
