use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::path::Path;

use cpnshare_pseudonym::{schnorr, Authority, Group, OpCounter, Params, P256};
use rand::{CryptoRng, RngCore};
use serde::Serialize;

use crate::block::{payload_hash, Block, BlockExport, Hash};
use crate::codec::{ByteReader, ByteWriter};
use crate::entry::Entry;
use crate::{Error, Result};

const MAGIC: &[u8; 4] = b"CPNL";
const VERSION: u8 = 1;

/// Public keys allowed to write blocks.
#[derive(Debug, Clone, Default)]
pub struct WriterRegistry {
    keys: HashSet<Vec<u8>>,
}

impl WriterRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn register(&mut self, key: &<P256 as Group>::Element) {
        self.keys.insert(encode_key(key));
    }

    pub fn contains(&self, key: &<P256 as Group>::Element) -> bool {
        self.keys.contains(&encode_key(key))
    }
}

fn encode_key(key: &<P256 as Group>::Element) -> Vec<u8> {
    let mut v = Vec::new();
    P256.encode_element(key, &mut v);
    v
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Violation {
    Height,
    PrevHash,
    PayloadHash,
    UnregisteredWriter,
    Signature,
    EmptyPayload,
    InvalidEntry,
    Genesis,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Violation::Height => "height out of sequence",
            Violation::PrevHash => "previous-hash link broken",
            Violation::PayloadHash => "payload hash mismatch",
            Violation::UnregisteredWriter => "writer key not registered",
            Violation::Signature => "signature does not verify",
            Violation::EmptyPayload => "empty payload",
            Violation::InvalidEntry => "invalid payload entry",
            Violation::Genesis => "malformed genesis block",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Validity {
    Valid,
    Invalid { height: u64, reason: Violation },
}

impl Validity {
    pub fn is_valid(&self) -> bool {
        matches!(self, Validity::Valid)
    }
}

/// Latest state of a device according to the chain.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResourceState {
    pub occupied: bool,
    pub capacity_hz: f64,
    /// Height of the block holding the winning update.
    pub height: u64,
}

/// Walks links, payload hashes, writers and signatures; reports the first bad block.
pub fn validate_chain(blocks: &[Block], writers: &WriterRegistry) -> Validity {
    let params = Params::new(P256);
    let mut counter = OpCounter::new();
    let mut prev: Option<Hash> = None;
    for (i, b) in blocks.iter().enumerate() {
        let bad = |reason| Validity::Invalid { height: i as u64, reason };
        if b.height != i as u64 {
            return bad(Violation::Height);
        }
        match prev {
            None if b.prev_hash != [0; 32] || !b.payload.is_empty() => return bad(Violation::Genesis),
            Some(h) if b.prev_hash != h => return bad(Violation::PrevHash),
            Some(_) if b.payload.is_empty() => return bad(Violation::EmptyPayload),
            _ => {}
        }
        if b.payload_hash != payload_hash(&b.payload) {
            return bad(Violation::PayloadHash);
        }
        if b.payload.iter().any(|e| e.validate().is_err()) {
            return bad(Violation::InvalidEntry);
        }
        if !writers.contains(&b.writer) {
            return bad(Violation::UnregisteredWriter);
        }
        if !schnorr::verify(&params, &b.writer, &b.signing_message(), &b.signature, &mut counter) {
            return bad(Violation::Signature);
        }
        prev = Some(b.hash());
    }
    Validity::Valid
}

/// Last-write-wins view of resource updates, in block and entry order.
pub fn fold_resource_state(blocks: &[Block]) -> BTreeMap<String, ResourceState> {
    let mut view = BTreeMap::new();
    for b in blocks {
        for e in &b.payload {
            if let Entry::Resource(u) = e {
                view.insert(u.device.clone(), ResourceState { occupied: u.occupied, capacity_hz: u.capacity_hz, height: b.height });
            }
        }
    }
    view
}

/// A single-writer chain with a permissioned writer set.
#[derive(Debug, Clone)]
pub struct Ledger {
    blocks: Vec<Block>,
    writers: WriterRegistry,
}

impl Ledger {
    /// Starts a chain with an empty, signed genesis block. The writer is added to the registry.
    pub fn genesis(writer: &Authority<P256>, mut writers: WriterRegistry, rng: &mut (impl RngCore + CryptoRng)) -> Self {
        writers.register(writer.public_key());
        let mut ledger = Self { blocks: Vec::new(), writers };
        ledger.push(Vec::new(), writer, rng);
        ledger
    }

    /// Wraps existing blocks; nothing is checked until [`Ledger::validate`].
    pub fn from_blocks(blocks: Vec<Block>, writers: WriterRegistry) -> Self {
        Self { blocks, writers }
    }

    pub fn blocks(&self) -> &[Block] {
        &self.blocks
    }

    /// Mutable access for fault injection in tests and demos.
    pub fn blocks_mut(&mut self) -> &mut Vec<Block> {
        &mut self.blocks
    }

    pub fn writers(&self) -> &WriterRegistry {
        &self.writers
    }

    pub fn head(&self) -> &Block {
        self.blocks.last().expect("ledger has a genesis block")
    }

    pub fn len(&self) -> usize {
        self.blocks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.blocks.is_empty()
    }

    pub fn append_block(&mut self, payload: Vec<Entry>, writer: &Authority<P256>, rng: &mut (impl RngCore + CryptoRng)) -> Result<&Block> {
        if payload.is_empty() {
            return Err(Error::EmptyPayload);
        }
        if !self.writers.contains(writer.public_key()) {
            return Err(Error::UnregisteredWriter);
        }
        for e in &payload {
            e.validate()?;
        }
        self.push(payload, writer, rng);
        Ok(self.head())
    }

    fn push(&mut self, payload: Vec<Entry>, writer: &Authority<P256>, rng: &mut (impl RngCore + CryptoRng)) {
        let height = self.blocks.len() as u64;
        let prev_hash = self.blocks.last().map_or([0; 32], Block::hash);
        let payload_hash = payload_hash(&payload);
        let message = crate::block::signing_message(height, &prev_hash, &payload_hash, writer.public_key());
        let signature = writer.sign(&message, rng, &mut OpCounter::new());
        self.blocks.push(Block { height, prev_hash, payload_hash, payload, writer: *writer.public_key(), signature });
    }

    pub fn validate(&self) -> Validity {
        validate_chain(&self.blocks, &self.writers)
    }

    /// Refuses to answer for an invalid chain.
    pub fn query_resource_state(&self) -> Result<BTreeMap<String, ResourceState>> {
        if let Validity::Invalid { height, reason } = self.validate() {
            return Err(Error::InvalidChain { height, reason });
        }
        Ok(fold_resource_state(&self.blocks))
    }

    /// `"CPNL" ∥ version byte ∥ (u32 length ∥ block bytes)*`.
    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = ByteWriter::default();
        w.bytes(MAGIC);
        w.u8(VERSION);
        for b in &self.blocks {
            let bytes = b.to_bytes();
            w.u32(bytes.len() as u32);
            w.bytes(&bytes);
        }
        w.0
    }

    pub fn from_bytes(bytes: &[u8], writers: WriterRegistry) -> Result<Self> {
        let mut r = ByteReader { bytes };
        if r.take(4)? != MAGIC {
            return Err(Error::Format("bad magic".into()));
        }
        let version = r.u8()?;
        if version != VERSION {
            return Err(Error::Format(format!("unsupported version {version}")));
        }
        let mut blocks = Vec::new();
        while !r.bytes.is_empty() {
            let len = r.u32()? as usize;
            blocks.push(Block::from_bytes(r.take(len)?)?);
        }
        Ok(Self { blocks, writers })
    }

    pub fn save(&self, path: impl AsRef<Path>) -> Result<()> {
        std::fs::write(path, self.to_bytes()).map_err(|e| Error::Io(e.to_string()))
    }

    pub fn load(path: impl AsRef<Path>, writers: WriterRegistry) -> Result<Self> {
        let bytes = std::fs::read(path).map_err(|e| Error::Io(e.to_string()))?;
        Self::from_bytes(&bytes, writers)
    }

    pub fn export_json(&self) -> Result<String> {
        let blocks: Vec<BlockExport> = self.blocks.iter().map(Block::export).collect();
        serde_json::to_string_pretty(&blocks).map_err(|e| Error::Format(e.to_string()))
    }
}
