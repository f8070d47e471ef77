use std::collections::HashMap;
use std::sync::Mutex;

use rand::{CryptoRng, RngCore};

use crate::counter::{OpCounter, Phase};
use crate::error::FailedCheck;
use crate::group::Group;
use crate::params::Params;
use crate::schnorr::{self, Signature};
use crate::{Error, Result};

pub type Digest = [u8; 32];

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct KeyPair<G: Group> {
    secret: G::Scalar,
    public: G::Element,
}

impl<G: Group> KeyPair<G> {
    /// Fresh key pair; one point multiplication charged to the pseudonym phase.
    pub fn generate(params: &Params<G>, rng: &mut (impl RngCore + CryptoRng), counter: &mut OpCounter) -> Self {
        let secret = params.fresh_nonce(rng);
        Self::derive(params, secret, counter)
    }

    pub fn from_secret(params: &Params<G>, secret: G::Scalar, counter: &mut OpCounter) -> Result<Self> {
        params.check_nonce(&secret)?;
        Ok(Self::derive(params, secret, counter))
    }

    fn derive(params: &Params<G>, secret: G::Scalar, counter: &mut OpCounter) -> Self {
        let public = params.meter(counter, Phase::Pseudonym).mul_g(&secret);
        Self { secret, public }
    }

    pub fn public(&self) -> &G::Element {
        &self.public
    }

    pub(crate) fn secret(&self) -> &G::Scalar {
        &self.secret
    }

    /// Recomputes secret·g (uncounted).
    pub fn is_consistent(&self, params: &Params<G>) -> bool {
        params.group.mul(&params.generator(), &self.secret) == self.public
    }
}

/// Registration digest H(H(ID) ∥ pk) and the authority's signature over it.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct IdentityRecord<G: Group> {
    pub digest: Digest,
    pub certificate: Signature<G>,
}

/// x = γ·g and y = d·x.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Pseudonym<G: Group> {
    pub x: G::Element,
    pub y: G::Element,
}

/// K = δ·x and M = δ + ε·d.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Transcript<G: Group> {
    pub k: G::Element,
    pub m: G::Scalar,
}

/// O = φ·g and P = φ + ζ·b.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Certificate<G: Group> {
    pub o: G::Element,
    pub p: G::Scalar,
}

/// Everything a device presents to a peer.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Credential<G: Group> {
    pub pseudonym: Pseudonym<G>,
    pub transcript: Transcript<G>,
    pub certificate: Certificate<G>,
}

/// Message 1: device to authority.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Hello<G: Group> {
    pub g: G::Element,
    pub dg: G::Element,
}

/// Message 2: authority to device.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Offer<G: Group> {
    pub x: G::Element,
}

/// Message 3: device to authority.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Response<G: Group> {
    pub y: G::Element,
    pub k: G::Element,
    pub m: G::Scalar,
}

/// Authority-side state between messages 2 and 3.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PendingPseudonym<G: Group> {
    digest: Digest,
    public: G::Element,
    x: G::Element,
}

#[derive(Debug)]
struct Entry<G: Group> {
    public: G::Element,
    pseudonyms: Vec<Pseudonym<G>>,
}

#[derive(Debug)]
struct Store<G: Group> {
    by_digest: HashMap<Digest, Entry<G>>,
    by_key: HashMap<Vec<u8>, Digest>,
    by_x: HashMap<Vec<u8>, Digest>,
}

/// The certifying base station: holds the signing key, the registry and issued pseudonyms.
#[derive(Debug)]
pub struct Authority<G: Group> {
    params: Params<G>,
    keys: KeyPair<G>,
    store: Mutex<Store<G>>,
}

impl<G: Group> Authority<G> {
    /// Creates the authority key pair (one point multiplication, pseudonym phase).
    pub fn setup(params: Params<G>, rng: &mut (impl RngCore + CryptoRng), counter: &mut OpCounter) -> Self {
        let keys = KeyPair::generate(&params, rng, counter);
        Self::with_keys(params, keys)
    }

    pub fn with_secret(params: Params<G>, secret: G::Scalar, counter: &mut OpCounter) -> Result<Self> {
        let keys = KeyPair::from_secret(&params, secret, counter)?;
        Ok(Self::with_keys(params, keys))
    }

    fn with_keys(params: Params<G>, keys: KeyPair<G>) -> Self {
        let store = Store { by_digest: HashMap::new(), by_key: HashMap::new(), by_x: HashMap::new() };
        Self { params, keys, store: Mutex::new(store) }
    }

    pub fn params(&self) -> &Params<G> {
        &self.params
    }

    pub fn public_key(&self) -> &G::Element {
        self.keys.public()
    }

    /// Schnorr signature with the authority key, charged to the signature phase.
    pub fn sign(&self, message: &[u8], rng: &mut (impl RngCore + CryptoRng), counter: &mut OpCounter) -> Signature<G> {
        schnorr::sign(&self.params, &self.keys, message, rng, counter)
    }

    fn key_bytes(&self, e: &G::Element) -> Vec<u8> {
        let mut v = Vec::with_capacity(self.params.group.element_len());
        self.params.group.encode_element(e, &mut v);
        v
    }

    /// H(H(identity) ∥ public), two hashes in the pseudonym phase.
    pub fn identity_digest(&self, identity: &str, public: &G::Element, counter: &mut OpCounter) -> Digest {
        let mut m = self.params.meter(counter, Phase::Pseudonym);
        let mut buf = m.hash(identity.as_bytes()).to_vec();
        buf.extend(self.key_bytes(public));
        m.hash(&buf)
    }

    /// Stores the identity digest and signs it. The signature is charged to the signature phase.
    pub fn register(
        &self,
        identity: &str,
        public: &G::Element,
        rng: &mut (impl RngCore + CryptoRng),
        counter: &mut OpCounter,
    ) -> Result<IdentityRecord<G>> {
        if *public == self.params.group.identity() {
            return Err(Error::InvalidElement);
        }
        let digest = self.identity_digest(identity, public, counter);
        let key = self.key_bytes(public);
        {
            let mut store = self.store.lock().unwrap();
            if store.by_digest.contains_key(&digest) {
                return Err(Error::AlreadyRegistered);
            }
            if store.by_key.contains_key(&key) {
                return Err(Error::KeyInUse);
            }
            store.by_digest.insert(digest, Entry { public: *public, pseudonyms: Vec::new() });
            store.by_key.insert(key, digest);
        }
        let certificate = schnorr::sign(&self.params, &self.keys, &digest, rng, counter);
        Ok(IdentityRecord { digest, certificate })
    }

    pub fn is_registered(&self, digest: &Digest) -> bool {
        self.store.lock().unwrap().by_digest.contains_key(digest)
    }

    /// Checks an identity certificate against this authority's key.
    pub fn verify_record(&self, record: &IdentityRecord<G>, counter: &mut OpCounter) -> bool {
        schnorr::verify(&self.params, self.public_key(), &record.digest, &record.certificate, counter)
    }

    /// Message 2: x = γ·g for a registered device key.
    pub fn offer(&self, hello: &Hello<G>, rng: &mut (impl RngCore + CryptoRng), counter: &mut OpCounter) -> Result<(Offer<G>, PendingPseudonym<G>)> {
        let gamma = self.params.fresh_nonce(rng);
        self.offer_with_nonce(hello, gamma, counter)
    }

    pub fn offer_with_nonce(&self, hello: &Hello<G>, gamma: G::Scalar, counter: &mut OpCounter) -> Result<(Offer<G>, PendingPseudonym<G>)> {
        self.params.check_nonce(&gamma)?;
        if hello.g != self.params.generator() {
            return Err(Error::WrongGenerator);
        }
        let digest = *self.store.lock().unwrap().by_key.get(&self.key_bytes(&hello.dg)).ok_or(Error::NotRegistered)?;
        let x = self.params.meter(counter, Phase::Pseudonym).mul_g(&gamma);
        Ok((Offer { x }, PendingPseudonym { digest, public: hello.dg, x }))
    }

    /// Verifies M·x = K + ε'·y and stores (x, y) for the device on success.
    pub fn accept(&self, pending: &PendingPseudonym<G>, response: &Response<G>, counter: &mut OpCounter) -> Result<Pseudonym<G>> {
        let pseudonym = Pseudonym { x: pending.x, y: response.y };
        let transcript = Transcript { k: response.k, m: response.m };
        if !transcript_holds(&self.params, &pseudonym, &transcript, Phase::Pseudonym, counter) {
            return Err(Error::PseudonymRejected);
        }
        let mut store = self.store.lock().unwrap();
        let entry = store.by_digest.get_mut(&pending.digest).ok_or(Error::NotRegistered)?;
        if entry.public != pending.public {
            return Err(Error::NotRegistered);
        }
        entry.pseudonyms.push(pseudonym);
        let x = self.key_bytes(&pseudonym.x);
        store.by_x.insert(x, pending.digest);
        Ok(pseudonym)
    }

    /// O = φ·g, ζ = H(x ∥ y ∥ O), P = φ + ζ·b for a pseudonym this authority accepted.
    pub fn issue_certificate(
        &self,
        pseudonym: &Pseudonym<G>,
        rng: &mut (impl RngCore + CryptoRng),
        counter: &mut OpCounter,
    ) -> Result<Certificate<G>> {
        let phi = self.params.fresh_nonce(rng);
        self.issue_certificate_with_nonce(pseudonym, phi, counter)
    }

    pub fn issue_certificate_with_nonce(&self, pseudonym: &Pseudonym<G>, phi: G::Scalar, counter: &mut OpCounter) -> Result<Certificate<G>> {
        self.params.check_nonce(&phi)?;
        if self.trace(pseudonym).is_none() {
            return Err(Error::UnknownPseudonym);
        }
        let mut m = self.params.meter(counter, Phase::Certificate);
        let o = m.mul_g(&phi);
        let zeta = m.challenge(&[pseudonym.x, pseudonym.y, o], &[]);
        let g = &self.params.group;
        Ok(Certificate { o, p: g.scalar_add(&phi, &g.scalar_mul(&zeta, self.keys.secret())) })
    }

    /// Registration digest behind a pseudonym this authority accepted.
    pub fn trace(&self, pseudonym: &Pseudonym<G>) -> Option<Digest> {
        let store = self.store.lock().unwrap();
        let digest = *store.by_x.get(&self.key_bytes(&pseudonym.x))?;
        store.by_digest[&digest].pseudonyms.contains(pseudonym).then_some(digest)
    }

    pub fn pseudonyms_of(&self, digest: &Digest) -> Vec<Pseudonym<G>> {
        self.store.lock().unwrap().by_digest.get(digest).map(|e| e.pseudonyms.clone()).unwrap_or_default()
    }
}

/// A device with its long-term key and, once enrolled, its current credential.
#[derive(Debug, Clone)]
pub struct Device<G: Group> {
    identity: String,
    keys: KeyPair<G>,
    record: Option<IdentityRecord<G>>,
    credential: Option<Credential<G>>,
}

impl<G: Group> Device<G> {
    /// Generates the device key (one point multiplication, pseudonym phase).
    pub fn new(identity: impl Into<String>, params: &Params<G>, rng: &mut (impl RngCore + CryptoRng), counter: &mut OpCounter) -> Self {
        Self::with_keys(identity, KeyPair::generate(params, rng, counter))
    }

    pub fn with_secret(identity: impl Into<String>, params: &Params<G>, secret: G::Scalar, counter: &mut OpCounter) -> Result<Self> {
        Ok(Self::with_keys(identity, KeyPair::from_secret(params, secret, counter)?))
    }

    fn with_keys(identity: impl Into<String>, keys: KeyPair<G>) -> Self {
        Self { identity: identity.into(), keys, record: None, credential: None }
    }

    pub fn identity(&self) -> &str {
        &self.identity
    }

    pub fn public_key(&self) -> &G::Element {
        self.keys.public()
    }

    pub fn record(&self) -> Option<&IdentityRecord<G>> {
        self.record.as_ref()
    }

    pub fn credential(&self) -> Option<&Credential<G>> {
        self.credential.as_ref()
    }

    pub fn register(&mut self, authority: &Authority<G>, rng: &mut (impl RngCore + CryptoRng), counter: &mut OpCounter) -> Result<IdentityRecord<G>> {
        let record = authority.register(&self.identity, self.keys.public(), rng, counter)?;
        self.record = Some(record);
        Ok(record)
    }

    /// Message 1.
    pub fn hello(&self, params: &Params<G>) -> Hello<G> {
        Hello { g: params.generator(), dg: *self.keys.public() }
    }

    /// Message 3: y = d·x, K = δ·x, ε = H(x ∥ y ∥ K), M = δ + ε·d.
    pub fn respond(
        &self,
        params: &Params<G>,
        offer: &Offer<G>,
        rng: &mut (impl RngCore + CryptoRng),
        counter: &mut OpCounter,
    ) -> Result<(Response<G>, Transcript<G>)> {
        let delta = params.fresh_nonce(rng);
        self.respond_with_nonce(params, offer, delta, counter)
    }

    pub fn respond_with_nonce(
        &self,
        params: &Params<G>,
        offer: &Offer<G>,
        delta: G::Scalar,
        counter: &mut OpCounter,
    ) -> Result<(Response<G>, Transcript<G>)> {
        params.check_nonce(&delta)?;
        if offer.x == params.group.identity() {
            return Err(Error::InvalidElement);
        }
        let mut meter = params.meter(counter, Phase::Pseudonym);
        let y = meter.mul(&offer.x, self.keys.secret());
        let k = meter.mul(&offer.x, &delta);
        let eps = meter.challenge(&[offer.x, y, k], &[]);
        let g = &params.group;
        let m = g.scalar_add(&delta, &g.scalar_mul(&eps, self.keys.secret()));
        Ok((Response { y, k, m }, Transcript { k, m }))
    }

    pub fn install(&mut self, credential: Credential<G>) {
        self.credential = Some(credential);
    }
}

fn transcript_holds<G: Group>(
    params: &Params<G>,
    pseudonym: &Pseudonym<G>,
    transcript: &Transcript<G>,
    phase: Phase,
    counter: &mut OpCounter,
) -> bool {
    let mut m = params.meter(counter, phase);
    let eps = m.challenge(&[pseudonym.x, pseudonym.y, transcript.k], &[]);
    let lhs = m.mul(&pseudonym.x, &transcript.m);
    let ey = m.mul(&pseudonym.y, &eps);
    let rhs = m.add(&transcript.k, &ey);
    lhs == rhs
}

fn certificate_holds<G: Group>(
    params: &Params<G>,
    pseudonym: &Pseudonym<G>,
    certificate: &Certificate<G>,
    issuer: &G::Element,
    phase: Phase,
    counter: &mut OpCounter,
) -> bool {
    let mut m = params.meter(counter, phase);
    let zeta = m.challenge(&[pseudonym.x, pseudonym.y, certificate.o], &[]);
    let lhs = m.mul_g(&certificate.p);
    let zh = m.mul(issuer, &zeta);
    let rhs = m.add(&certificate.o, &zh);
    lhs == rhs
}

/// Device-side check P·g = O + ζ'·h (2 mults, 1 add, 1 hash in the certificate phase).
pub fn certificate_check<G: Group>(
    params: &Params<G>,
    pseudonym: &Pseudonym<G>,
    certificate: &Certificate<G>,
    issuer: &G::Element,
    counter: &mut OpCounter,
) -> Result<()> {
    if certificate_holds(params, pseudonym, certificate, issuer, Phase::Certificate, counter) {
        Ok(())
    } else {
        Err(Error::CertificateRejected)
    }
}

/// Peer verification of transcript and certificate. Both checks always run, so the cost is a
/// constant 4 mults, 2 adds and 2 hashes in the verification phase.
pub fn identity_verify<G: Group>(params: &Params<G>, credential: &Credential<G>, issuer: &G::Element, counter: &mut OpCounter) -> Result<()> {
    let t = transcript_holds(params, &credential.pseudonym, &credential.transcript, Phase::Verification, counter);
    let c = certificate_holds(params, &credential.pseudonym, &credential.certificate, issuer, Phase::Verification, counter);
    match (t, c) {
        (true, true) => Ok(()),
        (false, true) => Err(Error::VerificationFailed(FailedCheck::Transcript)),
        (true, false) => Err(Error::VerificationFailed(FailedCheck::Certificate)),
        (false, false) => Err(Error::VerificationFailed(FailedCheck::Both)),
    }
}

/// Runs the three-message pseudonym exchange for a registered device.
pub fn generate_pseudonym<G: Group>(
    authority: &Authority<G>,
    device: &Device<G>,
    rng: &mut (impl RngCore + CryptoRng),
    counter: &mut OpCounter,
) -> Result<(Pseudonym<G>, Transcript<G>)> {
    let params = authority.params();
    let (offer, pending) = authority.offer(&device.hello(params), rng, counter)?;
    let (response, transcript) = device.respond(params, &offer, rng, counter)?;
    let pseudonym = authority.accept(&pending, &response, counter)?;
    Ok((pseudonym, transcript))
}

/// Pseudonym exchange followed by certificate issuance and the device's check. The
/// resulting credential is installed on the device.
pub fn enroll<G: Group>(
    authority: &Authority<G>,
    device: &mut Device<G>,
    rng: &mut (impl RngCore + CryptoRng),
    counter: &mut OpCounter,
) -> Result<Credential<G>> {
    let (pseudonym, transcript) = generate_pseudonym(authority, device, rng, counter)?;
    let certificate = authority.issue_certificate(&pseudonym, rng, counter)?;
    certificate_check(authority.params(), &pseudonym, &certificate, authority.public_key(), counter)?;
    let credential = Credential { pseudonym, transcript, certificate };
    device.install(credential);
    Ok(credential)
}

/// Replaces the device's credential after its current one verifies. The authority keeps the
/// old pseudonym for tracing.
pub fn pseudonym_update<G: Group>(
    authority: &Authority<G>,
    device: &mut Device<G>,
    rng: &mut (impl RngCore + CryptoRng),
    counter: &mut OpCounter,
) -> Result<Credential<G>> {
    let current = device.credential().copied().ok_or_else(|| Error::UpdateDenied("device holds no credential".into()))?;
    identity_verify(authority.params(), &current, authority.public_key(), counter).map_err(|e| Error::UpdateDenied(e.to_string()))?;
    if authority.trace(&current.pseudonym).is_none() {
        return Err(Error::UpdateDenied("pseudonym was not issued by this authority".into()));
    }
    enroll(authority, device, rng, counter)
}
