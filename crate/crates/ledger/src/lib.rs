//! Append-only, hash-linked ledger written by a single certifying authority.
//!
//! Blocks carry pseudonymous trade records and resource-status updates. Each block links
//! to its predecessor by SHA-256, commits to its payload by hash and is Schnorr-signed by a
//! registered writer key. [`Ledger::query_resource_state`] folds the updates into the latest
//! per-device view.

mod block;
mod chain;
mod codec;
mod entry;

use thiserror::Error;

pub use block::{payload_hash, Block, BlockExport, Hash};
pub use chain::{fold_resource_state, validate_chain, Ledger, ResourceState, Validity, Violation, WriterRegistry};
pub use entry::{Entry, ResourceUpdate, TaskSummary, TradeRecord};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("payload must not be empty")]
    EmptyPayload,
    #[error("writer key is not registered")]
    UnregisteredWriter,
    #[error("invalid entry: {0}")]
    InvalidEntry(String),
    #[error("chain invalid at height {height}: {reason}")]
    InvalidChain { height: u64, reason: Violation },
    #[error("malformed ledger data: {0}")]
    Format(String),
    #[error("i/o error: {0}")]
    Io(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
