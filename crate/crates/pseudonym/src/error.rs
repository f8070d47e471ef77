use std::fmt;

use thiserror::Error;

/// Which half of an identity verification did not hold.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FailedCheck {
    Transcript,
    Certificate,
    Both,
}

impl fmt::Display for FailedCheck {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FailedCheck::Transcript => "transcript check",
            FailedCheck::Certificate => "certificate check",
            FailedCheck::Both => "transcript and certificate checks",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("unsupported security level: {0} bits")]
    UnsupportedLevel(u32),
    #[error("invalid group: {0}")]
    InvalidGroup(String),
    #[error("invalid group element")]
    InvalidElement,
    #[error("invalid scalar")]
    InvalidScalar,
    #[error("nonce must be non-zero")]
    ZeroNonce,
    #[error("identity digest already registered")]
    AlreadyRegistered,
    #[error("public key already bound to another identity")]
    KeyInUse,
    #[error("device public key is not registered")]
    NotRegistered,
    #[error("message does not carry the group generator")]
    WrongGenerator,
    #[error("pseudonym rejected: transcript does not verify")]
    PseudonymRejected,
    #[error("pseudonym unknown to this authority")]
    UnknownPseudonym,
    #[error("certificate rejected")]
    CertificateRejected,
    #[error("identity verification failed: {0}")]
    VerificationFailed(FailedCheck),
    #[error("update denied: {0}")]
    UpdateDenied(String),
    #[error("malformed encoding: {0}")]
    Codec(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
