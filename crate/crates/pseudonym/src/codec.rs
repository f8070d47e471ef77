//! Length-prefixed wire encodings.
//!
//! Every field is written as a 2-byte big-endian length followed by the group's fixed-length
//! encoding (33-byte compressed point or 32-byte big-endian scalar on P-256). Fields appear
//! in declaration order:
//!
//! | type          | fields             |
//! |---------------|--------------------|
//! | `Pseudonym`   | x, y               |
//! | `Transcript`  | K, M               |
//! | `Certificate` | O, P               |
//! | `Credential`  | x, y, K, M, O, P   |
//! | `Signature`   | R, s               |
//!
//! Decoding is strict: lengths must match the group, scalars must be below the order, points
//! must be valid non-identity elements and no trailing bytes are allowed.

use crate::group::Group;
use crate::protocol::{Certificate, Credential, Pseudonym, Transcript};
use crate::schnorr::Signature;
use crate::{Error, Result};

pub trait Wire<G: Group>: Sized {
    fn write(&self, group: &G, out: &mut Writer);
    fn read(group: &G, input: &mut Reader<'_>) -> Result<Self>;

    fn encode(&self, group: &G) -> Vec<u8> {
        let mut w = Writer::default();
        self.write(group, &mut w);
        w.0
    }

    fn decode(group: &G, bytes: &[u8]) -> Result<Self> {
        let mut r = Reader { bytes };
        let v = Self::read(group, &mut r)?;
        if !r.bytes.is_empty() {
            return Err(Error::Codec(format!("{} trailing bytes", r.bytes.len())));
        }
        Ok(v)
    }
}

#[derive(Debug, Default)]
pub struct Writer(Vec<u8>);

impl Writer {
    fn field(&mut self, f: impl FnOnce(&mut Vec<u8>)) {
        let mut buf = Vec::new();
        f(&mut buf);
        let len = u16::try_from(buf.len()).expect("field fits in u16");
        self.0.extend_from_slice(&len.to_be_bytes());
        self.0.extend(buf);
    }

    fn element<G: Group>(&mut self, g: &G, e: &G::Element) {
        self.field(|b| g.encode_element(e, b));
    }

    fn scalar<G: Group>(&mut self, g: &G, s: &G::Scalar) {
        self.field(|b| g.encode_scalar(s, b));
    }
}

#[derive(Debug)]
pub struct Reader<'a> {
    bytes: &'a [u8],
}

impl<'a> Reader<'a> {
    fn field(&mut self, expected: usize) -> Result<&'a [u8]> {
        if self.bytes.len() < 2 {
            return Err(Error::Codec("truncated length prefix".into()));
        }
        let len = u16::from_be_bytes([self.bytes[0], self.bytes[1]]) as usize;
        if len != expected {
            return Err(Error::Codec(format!("field length {len}, expected {expected}")));
        }
        let rest = &self.bytes[2..];
        if rest.len() < len {
            return Err(Error::Codec("truncated field".into()));
        }
        let (head, tail) = rest.split_at(len);
        self.bytes = tail;
        Ok(head)
    }

    fn element<G: Group>(&mut self, g: &G) -> Result<G::Element> {
        g.decode_element(self.field(g.element_len())?)
    }

    fn scalar<G: Group>(&mut self, g: &G) -> Result<G::Scalar> {
        g.decode_scalar(self.field(g.scalar_len())?)
    }
}

impl<G: Group> Wire<G> for Pseudonym<G> {
    fn write(&self, g: &G, w: &mut Writer) {
        w.element(g, &self.x);
        w.element(g, &self.y);
    }

    fn read(g: &G, r: &mut Reader<'_>) -> Result<Self> {
        Ok(Self { x: r.element(g)?, y: r.element(g)? })
    }
}

impl<G: Group> Wire<G> for Transcript<G> {
    fn write(&self, g: &G, w: &mut Writer) {
        w.element(g, &self.k);
        w.scalar(g, &self.m);
    }

    fn read(g: &G, r: &mut Reader<'_>) -> Result<Self> {
        Ok(Self { k: r.element(g)?, m: r.scalar(g)? })
    }
}

impl<G: Group> Wire<G> for Certificate<G> {
    fn write(&self, g: &G, w: &mut Writer) {
        w.element(g, &self.o);
        w.scalar(g, &self.p);
    }

    fn read(g: &G, r: &mut Reader<'_>) -> Result<Self> {
        Ok(Self { o: r.element(g)?, p: r.scalar(g)? })
    }
}

impl<G: Group> Wire<G> for Credential<G> {
    fn write(&self, g: &G, w: &mut Writer) {
        self.pseudonym.write(g, w);
        self.transcript.write(g, w);
        self.certificate.write(g, w);
    }

    fn read(g: &G, r: &mut Reader<'_>) -> Result<Self> {
        Ok(Self { pseudonym: Pseudonym::read(g, r)?, transcript: Transcript::read(g, r)?, certificate: Certificate::read(g, r)? })
    }
}

impl<G: Group> Wire<G> for Signature<G> {
    fn write(&self, g: &G, w: &mut Writer) {
        w.element(g, &self.r);
        w.scalar(g, &self.s);
    }

    fn read(g: &G, r: &mut Reader<'_>) -> Result<Self> {
        Ok(Self { r: r.element(g)?, s: r.scalar(g)? })
    }
}
