use cpnshare_pseudonym::{Group, Signature, Wire, P256};
use serde::Serialize;
use sha2::{Digest, Sha256};

use crate::codec::{ByteReader, ByteWriter};
use crate::entry::Entry;
use crate::{Error, Result};

pub type Hash = [u8; 32];

/// One ledger block.
///
/// Byte layout (all integers big-endian):
/// `height: u64 ∥ prev_hash: 32 ∥ payload_hash: 32 ∥ writer: u16 len + 33-byte point ∥
/// signature: (u16 len + R) ∥ (u16 len + s) ∥ entry count: u32 ∥ entries`.
///
/// An entry is a tag byte (0 trade, 1 resource update) followed by its fields; strings are
/// u16-length-prefixed UTF-8, floats are IEEE-754 bit patterns as u64, booleans one byte.
/// The payload hash is SHA-256 over `entry count ∥ entries`; the signature covers
/// `height ∥ prev_hash ∥ payload_hash ∥ writer`.
#[derive(Debug, Clone, PartialEq)]
pub struct Block {
    pub height: u64,
    pub prev_hash: Hash,
    pub payload_hash: Hash,
    pub payload: Vec<Entry>,
    pub writer: <P256 as Group>::Element,
    pub signature: Signature<P256>,
}

pub fn payload_bytes(payload: &[Entry]) -> Vec<u8> {
    let mut w = ByteWriter::default();
    w.u32(payload.len() as u32);
    for e in payload {
        e.write(&mut w);
    }
    w.0
}

pub fn payload_hash(payload: &[Entry]) -> Hash {
    Sha256::digest(payload_bytes(payload)).into()
}

pub fn signing_message(height: u64, prev_hash: &Hash, payload_hash: &Hash, writer: &<P256 as Group>::Element) -> Vec<u8> {
    let mut w = ByteWriter::default();
    w.bytes(b"cpnshare-block");
    w.u64(height);
    w.bytes(prev_hash);
    w.bytes(payload_hash);
    let mut key = Vec::new();
    P256.encode_element(writer, &mut key);
    w.bytes(&key);
    w.0
}

impl Block {
    pub fn signing_message(&self) -> Vec<u8> {
        signing_message(self.height, &self.prev_hash, &self.payload_hash, &self.writer)
    }

    pub fn to_bytes(&self) -> Vec<u8> {
        let mut w = ByteWriter::default();
        w.u64(self.height);
        w.bytes(&self.prev_hash);
        w.bytes(&self.payload_hash);
        let mut key = Vec::new();
        P256.encode_element(&self.writer, &mut key);
        w.prefixed(&key);
        w.bytes(&self.signature.encode(&P256));
        w.bytes(&payload_bytes(&self.payload));
        w.0
    }

    /// Strict decoding: the input must be exactly the canonical encoding of the result.
    pub fn from_bytes(bytes: &[u8]) -> Result<Self> {
        let mut r = ByteReader { bytes };
        let height = r.u64()?;
        let prev_hash = r.array()?;
        let payload_hash = r.array()?;
        let writer = P256.decode_element(r.prefixed()?).map_err(|e| Error::Format(format!("writer key: {e}")))?;
        let sig_len = 2 + P256.element_len() + 2 + P256.scalar_len();
        let signature = Signature::decode(&P256, r.take(sig_len)?).map_err(|e| Error::Format(format!("signature: {e}")))?;
        let count = r.u32()? as usize;
        let mut payload = Vec::with_capacity(count.min(1 << 16));
        for _ in 0..count {
            payload.push(Entry::read(&mut r)?);
        }
        if !r.bytes.is_empty() {
            return Err(Error::Format(format!("{} trailing bytes in block", r.bytes.len())));
        }
        let block = Block { height, prev_hash, payload_hash, payload, writer, signature };
        if block.to_bytes() != bytes {
            return Err(Error::Format("non-canonical block encoding".into()));
        }
        Ok(block)
    }

    /// SHA-256 of the full encoding; the next block's `prev_hash`.
    pub fn hash(&self) -> Hash {
        Sha256::digest(self.to_bytes()).into()
    }

    pub fn export(&self) -> BlockExport {
        let mut key = Vec::new();
        P256.encode_element(&self.writer, &mut key);
        BlockExport {
            height: self.height,
            hash: hex::encode(self.hash()),
            prev_hash: hex::encode(self.prev_hash),
            payload_hash: hex::encode(self.payload_hash),
            writer: hex::encode(key),
            signature: hex::encode(self.signature.encode(&P256)),
            payload: self.payload.clone(),
        }
    }
}

/// JSON view of a block with hex-encoded binary fields.
#[derive(Debug, Clone, Serialize)]
pub struct BlockExport {
    pub height: u64,
    pub hash: String,
    pub prev_hash: String,
    pub payload_hash: String,
    pub writer: String,
    pub signature: String,
    pub payload: Vec<Entry>,
}
