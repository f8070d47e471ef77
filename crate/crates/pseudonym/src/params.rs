use rand::RngCore;
use sha2::{Digest, Sha256};

use crate::counter::{OpCounter, Phase};
use crate::group::{Group, P256};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum HashId {
    Sha256,
}

/// Public parameters: the group, its generator and the hash used for challenges.
#[derive(Debug)]
pub struct Params<G: Group> {
    pub group: G,
    pub hash: HashId,
    #[cfg(feature = "test-vectors")]
    fixed_challenge: std::sync::Mutex<Option<G::Scalar>>,
}

impl<G: Group> Clone for Params<G> {
    fn clone(&self) -> Self {
        Self {
            group: self.group,
            hash: self.hash,
            #[cfg(feature = "test-vectors")]
            fixed_challenge: std::sync::Mutex::new(*self.fixed_challenge.lock().unwrap()),
        }
    }
}

impl Params<P256> {
    /// Parameters for the requested security level. Only 128 bits is offered.
    pub fn p256(security_bits: u32) -> Result<Self> {
        if security_bits != 128 {
            return Err(Error::UnsupportedLevel(security_bits));
        }
        Ok(Self::new(P256))
    }
}

#[cfg(feature = "test-vectors")]
impl Params<crate::group::ToyGroup> {
    pub fn toy(q: u64) -> Result<Self> {
        Ok(Self::new(crate::group::ToyGroup::new(q)?))
    }
}

impl<G: Group> Params<G> {
    pub fn new(group: G) -> Self {
        Self {
            group,
            hash: HashId::Sha256,
            #[cfg(feature = "test-vectors")]
            fixed_challenge: std::sync::Mutex::new(None),
        }
    }

    pub fn generator(&self) -> G::Element {
        self.group.generator()
    }

    /// Replaces every Fiat-Shamir challenge with `value` (or restores hashing with `None`).
    #[cfg(feature = "test-vectors")]
    pub fn fix_challenge(&self, value: Option<G::Scalar>) {
        *self.fixed_challenge.lock().unwrap() = value;
    }

    /// SHA-256 over the concatenated fixed-length encodings, reduced mod q.
    pub fn challenge(&self, elements: &[G::Element], tail: &[u8]) -> G::Scalar {
        let mut buf = Vec::with_capacity(elements.len() * self.group.element_len() + tail.len());
        for e in elements {
            self.group.encode_element(e, &mut buf);
        }
        buf.extend_from_slice(tail);
        let digest: [u8; 32] = Sha256::digest(&buf).into();
        #[cfg(feature = "test-vectors")]
        if let Some(v) = *self.fixed_challenge.lock().unwrap() {
            return v;
        }
        self.group.reduce_digest(&digest)
    }

    pub(crate) fn meter<'a>(&'a self, counter: &'a mut OpCounter, phase: Phase) -> Meter<'a, G> {
        Meter { params: self, counter, phase }
    }

    pub(crate) fn fresh_nonce(&self, rng: &mut dyn RngCore) -> G::Scalar {
        self.group.random_scalar(rng)
    }

    pub(crate) fn check_nonce(&self, s: &G::Scalar) -> Result<()> {
        if self.group.scalar_is_zero(s) {
            return Err(Error::ZeroNonce);
        }
        Ok(())
    }
}

/// Group operations that charge the session counter.
pub(crate) struct Meter<'a, G: Group> {
    params: &'a Params<G>,
    counter: &'a mut OpCounter,
    phase: Phase,
}

impl<G: Group> Meter<'_, G> {
    pub fn mul(&mut self, e: &G::Element, s: &G::Scalar) -> G::Element {
        self.counter.point_mult(self.phase);
        self.params.group.mul(e, s)
    }

    pub fn mul_g(&mut self, s: &G::Scalar) -> G::Element {
        self.mul(&self.params.group.generator(), s)
    }

    pub fn add(&mut self, a: &G::Element, b: &G::Element) -> G::Element {
        self.counter.point_add(self.phase);
        self.params.group.add(a, b)
    }

    pub fn challenge(&mut self, elements: &[G::Element], tail: &[u8]) -> G::Scalar {
        self.counter.hash(self.phase);
        self.params.challenge(elements, tail)
    }

    pub fn hash(&mut self, data: &[u8]) -> [u8; 32] {
        self.counter.hash(self.phase);
        Sha256::digest(data).into()
    }
}
