use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::{Error, Result, Scalar};

/// Bits per kilobyte used for every data-size conversion.
pub const BITS_PER_KB: f64 = 8192.0;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Layer {
    User,
    Edge,
    Cloud,
}

impl Layer {
    pub const ALL: [Layer; 3] = [Layer::User, Layer::Edge, Layer::Cloud];

    #[inline]
    pub fn index(self) -> usize {
        self as usize
    }

    /// Whether a task sourced at `self` may be executed at `dest`.
    /// Offloading goes inwards (user, edge, cloud) or stays within the layer.
    #[inline]
    pub fn can_offload_to(self, dest: Layer) -> bool {
        dest >= self
    }
}

impl fmt::Display for Layer {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Layer::User => "user",
            Layer::Edge => "edge",
            Layer::Cloud => "cloud",
        })
    }
}

/// One value per layer, indexed user / edge / cloud.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct PerLayer<T> {
    pub user: T,
    pub edge: T,
    pub cloud: T,
}

impl<T: Copy> PerLayer<T> {
    pub fn get(&self, layer: Layer) -> T {
        match layer {
            Layer::User => self.user,
            Layer::Edge => self.edge,
            Layer::Cloud => self.cloud,
        }
    }

    pub fn to_array(&self) -> [T; 3] {
        [self.user, self.edge, self.cloud]
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Device<T> {
    pub id: String,
    pub layer: Layer,
    /// Cycles per second.
    pub capacity_hz: T,
    /// Price units per second of use.
    pub price: T,
    /// Effective switched capacitance.
    pub kappa: T,
    pub max_energy_j: T,
    /// Transmit power in watts; user devices only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub tx_power_w: Option<T>,
    /// Transmit power ceiling in watts; user devices only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub max_tx_power_w: Option<T>,
    /// Linear channel gain towards the base station; user devices only.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub channel_gain: Option<T>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Task<T> {
    pub id: String,
    pub source_device: String,
    pub data_kb: T,
    pub cycles: T,
    pub deadline_s: T,
    /// Tasks per second.
    pub arrival_rate: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ChannelParams<T> {
    pub bandwidth_hz: T,
    pub noise_power_w: T,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Economics<T> {
    pub beta1: T,
    pub beta2: T,
    /// Service coefficient per layer. When absent every layer uses
    /// `1 / mean cycles per task`, so that `alpha * capacity` is a service rate in tasks/s.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub alpha: Option<PerLayer<T>>,
}

/// The computing power network: devices, tasks, channel and economic parameters.
///
/// JSON layout:
///
/// ```json
/// {
///   "devices": [{"id": "u0", "layer": "user", "capacity_hz": 2e9, "price": 0.1,
///                "kappa": 1e-29, "max_energy_j": 5.0, "tx_power_w": 0.5,
///                "max_tx_power_w": 1.0, "channel_gain": 1.2}],
///   "tasks": [{"id": "t0", "source_device": "u0", "data_kb": 1000.0,
///              "cycles": 1.024e9, "deadline_s": 2.0, "arrival_rate": 100.0}],
///   "channel": {"bandwidth_hz": 2e7, "noise_power_w": 1.995e-13},
///   "economics": {"beta1": 0.6, "beta2": 0.4}
/// }
/// ```
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(bound = "T: Scalar")]
pub struct Scenario<T> {
    pub devices: Vec<Device<T>>,
    pub tasks: Vec<Task<T>>,
    pub channel: ChannelParams<T>,
    pub economics: Economics<T>,
}

fn positive<T: Scalar>(v: T, what: &str) -> Result<()> {
    if v.is_finite() && v > T::zero() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{what} must be positive and finite, got {v}")))
    }
}

fn non_negative<T: Scalar>(v: T, what: &str) -> Result<()> {
    if v.is_finite() && v >= T::zero() {
        Ok(())
    } else {
        Err(Error::InvalidInput(format!("{what} must be non-negative and finite, got {v}")))
    }
}

impl<T: Scalar> Scenario<T> {
    pub fn from_json(text: &str) -> Result<Self> {
        let s: Self = serde_json::from_str(text).map_err(|e| Error::Format(e.to_string()))?;
        s.validate()?;
        Ok(s)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("scenario serializes")
    }

    pub fn device_index(&self, id: &str) -> Option<usize> {
        self.devices.iter().position(|d| d.id == id)
    }

    pub fn layer_count(&self, layer: Layer) -> usize {
        self.devices.iter().filter(|d| d.layer == layer).count()
    }

    /// Source layer of each task, in task order.
    pub fn task_sources(&self) -> Result<Vec<Layer>> {
        self.tasks
            .iter()
            .map(|t| {
                self.device_index(&t.source_device)
                    .map(|i| self.devices[i].layer)
                    .ok_or_else(|| Error::InvalidInput(format!("task {} has unknown source device {}", t.id, t.source_device)))
            })
            .collect()
    }

    /// Whether every cloud device is faster than every edge device, and every edge device
    /// faster than every user device.
    pub fn capacity_ordering_holds(&self) -> bool {
        let bounds = |layer: Layer| {
            self.devices.iter().filter(|d| d.layer == layer).fold(None, |acc: Option<(T, T)>, d| {
                Some(match acc {
                    None => (d.capacity_hz, d.capacity_hz),
                    Some((lo, hi)) => (lo.min(d.capacity_hz), hi.max(d.capacity_hz)),
                })
            })
        };
        let (u, e, c) = (bounds(Layer::User), bounds(Layer::Edge), bounds(Layer::Cloud));
        let below = |inner: Option<(T, T)>, outer: Option<(T, T)>| match (inner, outer) {
            (Some((_, hi)), Some((lo, _))) => hi < lo,
            _ => true,
        };
        below(u, e) && below(e, c) && below(u, c)
    }

    /// Structural checks. Capacity ordering is not enforced here; it is reported as a
    /// constraint violation instead.
    pub fn validate(&self) -> Result<()> {
        if self.devices.is_empty() {
            return Err(Error::InvalidInput("scenario has no devices".into()));
        }
        let mut ids = HashSet::new();
        for d in &self.devices {
            if !ids.insert(d.id.as_str()) {
                return Err(Error::InvalidInput(format!("duplicate device id {}", d.id)));
            }
            positive(d.capacity_hz, "capacity_hz")?;
            non_negative(d.price, "price")?;
            positive(d.kappa, "kappa")?;
            positive(d.max_energy_j, "max_energy_j")?;
            if d.layer == Layer::User {
                let p = d.tx_power_w.ok_or_else(|| Error::InvalidInput(format!("user device {} lacks tx_power_w", d.id)))?;
                positive(p, "tx_power_w")?;
                let g = d.channel_gain.ok_or_else(|| Error::InvalidInput(format!("user device {} lacks channel_gain", d.id)))?;
                positive(g, "channel_gain")?;
                if let Some(m) = d.max_tx_power_w {
                    positive(m, "max_tx_power_w")?;
                }
            }
        }
        let mut task_ids = HashSet::new();
        for t in &self.tasks {
            if !task_ids.insert(t.id.as_str()) {
                return Err(Error::InvalidInput(format!("duplicate task id {}", t.id)));
            }
            positive(t.data_kb, "data_kb")?;
            positive(t.cycles, "cycles")?;
            positive(t.deadline_s, "deadline_s")?;
            positive(t.arrival_rate, "arrival_rate")?;
        }
        let sources = self.task_sources()?;
        for (t, src) in self.tasks.iter().zip(&sources) {
            if !Layer::ALL.iter().any(|&l| src.can_offload_to(l) && self.layer_count(l) > 0) {
                return Err(Error::InvalidInput(format!("task {} has no reachable layer", t.id)));
            }
        }
        positive(self.channel.bandwidth_hz, "bandwidth_hz")?;
        positive(self.channel.noise_power_w, "noise_power_w")?;
        non_negative(self.economics.beta1, "beta1")?;
        non_negative(self.economics.beta2, "beta2")?;
        if let Some(a) = self.economics.alpha {
            for v in a.to_array() {
                positive(v, "alpha")?;
            }
        }
        Ok(())
    }

    /// Per-layer service coefficients, resolving the default.
    pub fn alpha(&self) -> PerLayer<T> {
        self.economics.alpha.unwrap_or_else(|| {
            let a = if self.tasks.is_empty() {
                T::one()
            } else {
                let mean = self.tasks.iter().map(|t| t.cycles).sum::<T>() / T::of_usize(self.tasks.len());
                T::one() / mean
            };
            PerLayer { user: a, edge: a, cloud: a }
        })
    }
}

/// Offload probabilities per task (user, edge, cloud) and the occupancy bit per device.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AllocationDecision<T> {
    pub layer_probs: Vec<[T; 3]>,
    pub occupancy: Vec<bool>,
}

impl<T: Scalar> AllocationDecision<T> {
    /// Checks lengths, non-negativity and unit sums.
    pub fn validate(&self, tasks: usize, devices: usize) -> Result<()> {
        if self.layer_probs.len() != tasks {
            return Err(Error::InvalidDecision(format!("{} probability triples for {tasks} tasks", self.layer_probs.len())));
        }
        if self.occupancy.len() != devices {
            return Err(Error::InvalidDecision(format!("{} occupancy bits for {devices} devices", self.occupancy.len())));
        }
        for (t, p) in self.layer_probs.iter().enumerate() {
            if p.iter().any(|&v| !v.is_finite() || v < T::zero() || v > T::one()) {
                return Err(Error::InvalidDecision(format!("task {t} has a probability outside [0, 1]")));
            }
            let s = p[0] + p[1] + p[2];
            if (s - T::one()).abs() > T::unit_tolerance() {
                return Err(Error::InvalidDecision(format!("task {t} probabilities sum to {s}")));
            }
        }
        Ok(())
    }
}

/// The six objectives in their natural sense.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ObjectiveVector<T> {
    /// Total latency, seconds (minimized).
    pub l_tot: T,
    /// Total energy, joules (minimized).
    pub e_tot: T,
    /// Average occupancy in [0, 1] (maximized).
    pub o_ave: T,
    /// Average privacy entropy, bits (maximized).
    pub h_ave: T,
    /// Load-balancing deviation, cycles/s (minimized).
    pub b_tot: T,
    /// Sharing revenue (maximized).
    pub r_tot: T,
}

impl<T: Scalar> ObjectiveVector<T> {
    pub const NAMES: [&'static str; 6] = ["l_tot", "e_tot", "o_ave", "h_ave", "b_tot", "r_tot"];
    /// Which entries of [`Self::raw`] are maximized.
    pub const BENEFIT: [bool; 6] = [false, false, true, true, false, true];

    pub fn raw(&self) -> [T; 6] {
        [self.l_tot, self.e_tot, self.o_ave, self.h_ave, self.b_tot, self.r_tot]
    }

    /// Minimization form: maximized objectives negated.
    pub fn canonical(&self) -> [T; 6] {
        [self.l_tot, self.e_tot, -self.o_ave, -self.h_ave, self.b_tot, -self.r_tot]
    }

    pub fn from_raw(v: [T; 6]) -> Self {
        Self { l_tot: v[0], e_tot: v[1], o_ave: v[2], h_ave: v[3], b_tot: v[4], r_tot: v[5] }
    }

    pub fn from_canonical(v: &[T]) -> Result<Self> {
        if v.len() != 6 {
            return Err(Error::DimensionMismatch { expected: 6, found: v.len() });
        }
        Ok(Self { l_tot: v[0], e_tot: v[1], o_ave: -v[2], h_ave: -v[3], b_tot: v[4], r_tot: -v[5] })
    }
}

/// Violation magnitude per constraint; every entry is non-negative.
#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize, Deserialize)]
pub struct ConstraintReport<T> {
    /// Layer arrival rate above service capacity.
    pub service_rate: T,
    /// Transmit power above its ceiling.
    pub tx_power: T,
    /// Compute latency past the deadline, probability weighted.
    pub deadline: T,
    /// Compute energy above the device budget, probability weighted.
    pub energy: T,
    /// Capacity ordering (0 or 1) plus inadmissible offload mass.
    pub layer_order: T,
    /// Task cycles above what the executing layer delivers before the deadline.
    pub capacity: T,
}

impl<T: Scalar> ConstraintReport<T> {
    pub fn entries(&self) -> [T; 6] {
        [self.service_rate, self.tx_power, self.deadline, self.energy, self.layer_order, self.capacity]
    }

    pub fn total_violation(&self) -> T {
        self.entries().into_iter().sum()
    }

    pub fn is_feasible(&self) -> bool {
        self.entries().iter().all(|v| *v == T::zero())
    }
}
