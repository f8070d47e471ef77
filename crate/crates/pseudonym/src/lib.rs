//! Pseudonymous device identities for a computing-resource sharing network.
//!
//! A certifying [`Authority`] registers device keys, runs a three-message Schnorr exchange
//! that binds a fresh pseudonym (x, y) to the device's key, and certifies the pseudonym with
//! a Schnorr-style certificate (O, P). Peers check both proofs with [`identity_verify`]
//! without learning which registered device they are talking to. Every group operation is
//! tallied per [`Phase`] in an [`OpCounter`].
//!
//! The production group is P-256 with SHA-256 challenges. The `test-vectors` feature adds an
//! insecure additive toy group and fixed challenges for hand-checkable vectors.

pub mod codec;
mod counter;
mod error;
mod group;
mod params;
mod protocol;
pub mod schnorr;

pub use codec::Wire;
pub use counter::{OpCounter, OpCounts, Phase};
pub use error::{Error, FailedCheck, Result};
#[cfg(feature = "test-vectors")]
pub use group::ToyGroup;
pub use group::{Group, P256};
pub use params::{HashId, Params};
pub use protocol::{
    certificate_check, enroll, generate_pseudonym, identity_verify, pseudonym_update, Authority, Certificate, Credential, Device, Digest, Hello,
    IdentityRecord, KeyPair, Offer, PendingPseudonym, Pseudonym, Response, Transcript,
};
pub use schnorr::Signature;

/// Operation counts of one full lifecycle: setup, key generation, registration and the
/// pseudonym exchange; certificate issuance and check; one peer verification.
pub const EXPECTED_COUNTS: [(Phase, OpCounts); 3] =
    [(Phase::Pseudonym, OpCounts::new(7, 1, 4)), (Phase::Certificate, OpCounts::new(3, 1, 2)), (Phase::Verification, OpCounts::new(4, 2, 2))];
