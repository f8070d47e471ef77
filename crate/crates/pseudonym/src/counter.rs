use std::fmt;
use std::ops::{Add, AddAssign};

/// Protocol phase an operation is charged to.
///
/// `Pseudonym` covers authority setup, device key generation, registration hashing and the
/// three-message pseudonym exchange. `Signature` collects the identity-certificate and ledger
/// signatures, which are kept out of the three protocol phases.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Phase {
    Pseudonym,
    Certificate,
    Verification,
    Signature,
}

impl Phase {
    pub const ALL: [Phase; 4] = [Phase::Pseudonym, Phase::Certificate, Phase::Verification, Phase::Signature];
    pub const PROTOCOL: [Phase; 3] = [Phase::Pseudonym, Phase::Certificate, Phase::Verification];

    pub fn name(self) -> &'static str {
        match self {
            Phase::Pseudonym => "pseudonym",
            Phase::Certificate => "certificate",
            Phase::Verification => "verification",
            Phase::Signature => "signature",
        }
    }

    fn index(self) -> usize {
        self as usize
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct OpCounts {
    pub point_mults: u64,
    pub point_adds: u64,
    pub hashes: u64,
}

impl OpCounts {
    pub const fn new(point_mults: u64, point_adds: u64, hashes: u64) -> Self {
        Self { point_mults, point_adds, hashes }
    }
}

impl Add for OpCounts {
    type Output = OpCounts;

    fn add(self, o: OpCounts) -> OpCounts {
        OpCounts::new(self.point_mults + o.point_mults, self.point_adds + o.point_adds, self.hashes + o.hashes)
    }
}

impl AddAssign for OpCounts {
    fn add_assign(&mut self, o: OpCounts) {
        *self = *self + o;
    }
}

impl fmt::Display for OpCounts {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({} mults, {} adds, {} hashes)", self.point_mults, self.point_adds, self.hashes)
    }
}

/// Per-phase tallies of group operations for one session.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct OpCounter {
    phases: [OpCounts; 4],
}

impl OpCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn get(&self, phase: Phase) -> OpCounts {
        self.phases[phase.index()]
    }

    /// Sum over the three protocol phases, excluding signatures.
    pub fn protocol_total(&self) -> OpCounts {
        Phase::PROTOCOL.iter().fold(OpCounts::default(), |acc, p| acc + self.get(*p))
    }

    pub fn reset(&mut self) {
        *self = Self::default();
    }

    pub(crate) fn point_mult(&mut self, phase: Phase) {
        self.phases[phase.index()].point_mults += 1;
    }

    pub(crate) fn point_add(&mut self, phase: Phase) {
        self.phases[phase.index()].point_adds += 1;
    }

    pub(crate) fn hash(&mut self, phase: Phase) {
        self.phases[phase.index()].hashes += 1;
    }
}
