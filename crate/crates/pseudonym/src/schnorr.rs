//! Schnorr signatures over the protocol group, used for identity certificates and ledger blocks.

use rand::{CryptoRng, RngCore};

use crate::counter::{OpCounter, Phase};
use crate::group::Group;
use crate::params::Params;
use crate::protocol::KeyPair;

/// Commitment R = r·g and response s = r + e·sk, with e = H(R ∥ pk ∥ msg).
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Signature<G: Group> {
    pub r: G::Element,
    pub s: G::Scalar,
}

pub fn sign<G: Group>(
    params: &Params<G>,
    keys: &KeyPair<G>,
    message: &[u8],
    rng: &mut (impl RngCore + CryptoRng),
    counter: &mut OpCounter,
) -> Signature<G> {
    let nonce = params.fresh_nonce(rng);
    let mut m = params.meter(counter, Phase::Signature);
    let r = m.mul_g(&nonce);
    let e = m.challenge(&[r, *keys.public()], message);
    let g = &params.group;
    Signature { r, s: g.scalar_add(&nonce, &g.scalar_mul(&e, keys.secret())) }
}

pub fn verify<G: Group>(params: &Params<G>, public: &G::Element, message: &[u8], signature: &Signature<G>, counter: &mut OpCounter) -> bool {
    let mut m = params.meter(counter, Phase::Signature);
    let e = m.challenge(&[signature.r, *public], message);
    let lhs = m.mul_g(&signature.s);
    let ep = m.mul(public, &e);
    let rhs = m.add(&signature.r, &ep);
    lhs == rhs
}
