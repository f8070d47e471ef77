use serde::{Deserialize, Serialize};

use crate::codec::{ByteReader, ByteWriter};
use crate::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TaskSummary {
    pub cycles: f64,
    pub data_kb: f64,
    pub deadline_s: f64,
}

/// A completed offload between a requester and a provider, both named by pseudonym.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TradeRecord {
    pub requester: String,
    pub provider: String,
    pub task: TaskSummary,
    pub price: f64,
    pub deadline_met: bool,
    pub timestamp: u64,
}

/// Latest advertised state of one device.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ResourceUpdate {
    pub device: String,
    pub occupied: bool,
    pub capacity_hz: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Entry {
    Trade(TradeRecord),
    Resource(ResourceUpdate),
}

impl Entry {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidEntry(m.into()));
        match self {
            Entry::Trade(t) => {
                if t.requester.is_empty() || t.provider.is_empty() {
                    return bad("trade pseudonyms must be non-empty");
                }
                if !(t.price.is_finite() && t.price >= 0.0) {
                    return bad("trade price must be finite and non-negative");
                }
                let TaskSummary { cycles, data_kb, deadline_s } = t.task;
                if [cycles, data_kb, deadline_s].iter().any(|v| !(v.is_finite() && *v >= 0.0)) {
                    return bad("task summary values must be finite and non-negative");
                }
            }
            Entry::Resource(r) => {
                if r.device.is_empty() {
                    return bad("resource update needs a device pseudonym");
                }
                if !(r.capacity_hz.is_finite() && r.capacity_hz >= 0.0) {
                    return bad("advertised capacity must be finite and non-negative");
                }
            }
        }
        Ok(())
    }

    pub(crate) fn write(&self, w: &mut ByteWriter) {
        match self {
            Entry::Trade(t) => {
                w.u8(0);
                w.string(&t.requester);
                w.string(&t.provider);
                w.f64(t.task.cycles);
                w.f64(t.task.data_kb);
                w.f64(t.task.deadline_s);
                w.f64(t.price);
                w.u8(t.deadline_met as u8);
                w.u64(t.timestamp);
            }
            Entry::Resource(r) => {
                w.u8(1);
                w.string(&r.device);
                w.u8(r.occupied as u8);
                w.f64(r.capacity_hz);
            }
        }
    }

    pub(crate) fn read(r: &mut ByteReader<'_>) -> Result<Self> {
        match r.u8()? {
            0 => Ok(Entry::Trade(TradeRecord {
                requester: r.string()?,
                provider: r.string()?,
                task: TaskSummary { cycles: r.f64()?, data_kb: r.f64()?, deadline_s: r.f64()? },
                price: r.f64()?,
                deadline_met: r.bool()?,
                timestamp: r.u64()?,
            })),
            1 => Ok(Entry::Resource(ResourceUpdate { device: r.string()?, occupied: r.bool()?, capacity_hz: r.f64()? })),
            t => Err(Error::Format(format!("unknown entry tag {t}"))),
        }
    }
}
