use crate::cpn::communication::{noma_rates, transmission_energy, transmission_latency, UserLink};
use crate::cpn::computing::{erlang_c, layer_arrival_rates, ErlangVariant, LayerPool};
use crate::cpn::service::{load_balancing, occupancy_average, privacy_entropy, sharing_revenue};
use crate::cpn::types::{AllocationDecision, ConstraintReport, Layer, ObjectiveVector, PerLayer, Scenario};
use crate::{Error, Result, Scalar};

/// How layers without a stable, occupied pool are treated during evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Mode {
    /// Unstable or empty pools carrying load are errors.
    Strict,
    /// Unstable pools get no queueing term and empty pools fall back to whole-layer means.
    /// Used by the optimizer, which prices the instability through the constraint report.
    Relaxed,
}

/// Aggregates of one layer under a decision.
#[derive(Debug, Clone, Copy)]
struct LayerState<T> {
    servers: usize,
    capacity: T,
    price: T,
    kappa: T,
    lambda: T,
    /// `Σ_t λ_t p_{t,d} ξ_t`, cycles per second offered to the layer.
    cycle_demand: T,
    /// Mean queueing delay, or `None` when the pool is unstable.
    queue: Option<T>,
}

/// A validated scenario with the decision-independent quantities precomputed.
#[derive(Debug, Clone)]
pub struct CpnModel<T> {
    scenario: Scenario<T>,
    sources: Vec<Layer>,
    arrival_rates: Vec<T>,
    tx_latency: Vec<T>,
    tx_energy: Vec<T>,
    alpha: PerLayer<T>,
    layer_devices: [Vec<usize>; 3],
    ordering_ok: bool,
    variant: ErlangVariant,
}

impl<T: Scalar> CpnModel<T> {
    pub fn new(scenario: Scenario<T>) -> Result<Self> {
        scenario.validate()?;
        let sources = scenario.task_sources()?;

        let mut users: Vec<usize> = (0..scenario.devices.len()).filter(|&i| scenario.devices[i].layer == Layer::User).collect();
        users.sort_by(|&a, &b| {
            let (ga, gb) = (scenario.devices[a].channel_gain, scenario.devices[b].channel_gain);
            ga.partial_cmp(&gb).expect("validated gains are finite").then(a.cmp(&b))
        });
        let links: Vec<UserLink<T>> = users
            .iter()
            .map(|&i| {
                let d = &scenario.devices[i];
                UserLink { tx_power_w: d.tx_power_w.unwrap_or_else(T::zero), channel_gain: d.channel_gain.unwrap_or_else(T::zero) }
            })
            .collect();
        let rates = noma_rates(&links, scenario.channel.bandwidth_hz, scenario.channel.noise_power_w)?;
        let mut device_rate = vec![T::zero(); scenario.devices.len()];
        for (&i, &r) in users.iter().zip(&rates) {
            device_rate[i] = r;
        }

        let mut tx_latency = Vec::with_capacity(scenario.tasks.len());
        let mut tx_energy = Vec::with_capacity(scenario.tasks.len());
        for t in &scenario.tasks {
            let src = scenario.device_index(&t.source_device).expect("validated source");
            let dev = &scenario.devices[src];
            if dev.layer == Layer::User {
                let l = transmission_latency(t.data_kb, device_rate[src])?;
                tx_latency.push(l);
                tx_energy.push(transmission_energy(dev.tx_power_w.unwrap_or_else(T::zero), l)?);
            } else {
                tx_latency.push(T::zero());
                tx_energy.push(T::zero());
            }
        }

        let mut layer_devices: [Vec<usize>; 3] = Default::default();
        for (i, d) in scenario.devices.iter().enumerate() {
            layer_devices[d.layer.index()].push(i);
        }

        Ok(Self {
            arrival_rates: scenario.tasks.iter().map(|t| t.arrival_rate).collect(),
            alpha: scenario.alpha(),
            ordering_ok: scenario.capacity_ordering_holds(),
            scenario,
            sources,
            tx_latency,
            tx_energy,
            layer_devices,
            variant: ErlangVariant::AsPrinted,
        })
    }

    /// Selects the Erlang C expression used for queueing delays.
    pub fn with_variant(mut self, variant: ErlangVariant) -> Self {
        self.variant = variant;
        self
    }

    pub fn scenario(&self) -> &Scenario<T> {
        &self.scenario
    }

    pub fn task_sources(&self) -> &[Layer] {
        &self.sources
    }

    /// Device indices belonging to `layer`.
    pub fn layer_devices(&self, layer: Layer) -> &[usize] {
        &self.layer_devices[layer.index()]
    }

    /// Transmission latency of each task from its source; zero for tasks not sourced at a user.
    pub fn transmission_latencies(&self) -> &[T] {
        &self.tx_latency
    }

    pub fn evaluate_objectives(&self, decision: &AllocationDecision<T>) -> Result<ObjectiveVector<T>> {
        self.objectives(decision, Mode::Strict)
    }

    /// Objectives that stay finite for any admissible decision: unstable pools contribute no
    /// queueing delay and unoccupied layers are priced at their whole-layer means.
    pub fn evaluate_relaxed(&self, decision: &AllocationDecision<T>) -> Result<ObjectiveVector<T>> {
        self.objectives(decision, Mode::Relaxed)
    }

    fn means(&self, idx: impl Iterator<Item = usize> + Clone) -> Option<(usize, T, T, T, T)> {
        let n = idx.clone().count();
        if n == 0 {
            return None;
        }
        let nn = T::of_usize(n);
        let devs = &self.scenario.devices;
        let mean = |f: &dyn Fn(usize) -> T| idx.clone().map(f).sum::<T>() / nn;
        Some((n, mean(&|i| devs[i].capacity_hz), mean(&|i| devs[i].price), mean(&|i| devs[i].kappa), mean(&|i| devs[i].max_energy_j)))
    }

    fn layer_states(&self, decision: &AllocationDecision<T>, mode: Mode) -> Result<[Option<LayerState<T>>; 3]> {
        decision.validate(self.scenario.tasks.len(), self.scenario.devices.len())?;
        let lambda = layer_arrival_rates(&self.sources, &self.arrival_rates, &decision.layer_probs)?;
        let mut out = [None; 3];
        for layer in Layer::ALL {
            let d = layer.index();
            let members = &self.layer_devices[d];
            let occupied = members.iter().copied().filter(|&i| decision.occupancy[i]);
            let cycle_demand: T = self.scenario.tasks.iter().zip(&decision.layer_probs).map(|(t, p)| t.arrival_rate * p[d] * t.cycles).sum();
            let agg = match self.means(occupied) {
                Some(a) => Some(a),
                None if lambda[d] > T::zero() => match mode {
                    Mode::Strict => return Err(Error::UnstableQueue { layer: Some(layer), rho: f64::INFINITY }),
                    Mode::Relaxed => self.means(members.iter().copied()).map(|(_, c, p, k, e)| (0, c, p, k, e)),
                },
                None => None,
            };
            let Some((servers, capacity, price, kappa, _)) = agg else {
                if lambda[d] > T::zero() {
                    return Err(Error::InvalidDecision(format!("load sent to the empty {layer} layer")));
                }
                continue;
            };
            let queue = if servers == 0 {
                None
            } else {
                let pool = LayerPool { servers, capacity_hz: capacity, arrival_rate: lambda[d], alpha: self.alpha.get(layer) };
                let rho = pool.utilisation();
                if rho >= T::one() {
                    if mode == Mode::Strict {
                        return Err(Error::UnstableQueue { layer: Some(layer), rho: rho.as_f64() });
                    }
                    None
                } else if lambda[d] == T::zero() {
                    Some(T::zero())
                } else {
                    let c = erlang_c(servers, rho, self.variant)?;
                    let total_rate = T::of_usize(servers) * pool.alpha * capacity;
                    Some(c / (total_rate * (T::one() - rho)))
                }
            };
            out[d] = Some(LayerState { servers, capacity, price, kappa, lambda: lambda[d], cycle_demand, queue });
        }
        Ok(out)
    }

    fn objectives(&self, decision: &AllocationDecision<T>, mode: Mode) -> Result<ObjectiveVector<T>> {
        let states = self.layer_states(decision, mode)?;
        let econ = &self.scenario.economics;

        let mut l_tot = T::zero();
        let mut e_tot = T::zero();
        for (t, task) in self.scenario.tasks.iter().enumerate() {
            let p = decision.layer_probs[t];
            for layer in Layer::ALL {
                let d = layer.index();
                if p[d] == T::zero() {
                    continue;
                }
                let s = states[d].as_ref().expect("loaded layer has a state");
                let latency = s.queue.unwrap_or_else(T::zero) + task.cycles / s.capacity;
                l_tot = l_tot + p[d] * latency;
                e_tot = e_tot + p[d] * s.kappa * task.cycles * s.capacity * s.capacity;
            }
            if self.sources[t] == Layer::User {
                let leaving = p[0] + p[1] + p[2];
                l_tot = l_tot + leaving * self.tx_latency[t];
                e_tot = e_tot + leaving * self.tx_energy[t];
            }
        }

        let mut h_sum = T::zero();
        let mut b_tot = T::zero();
        let mut r_tot = T::zero();
        let mut column = Vec::with_capacity(decision.layer_probs.len());
        for layer in Layer::ALL {
            let d = layer.index();
            column.clear();
            column.extend(decision.layer_probs.iter().map(|p| p[d]));
            h_sum = h_sum + privacy_entropy(&column)?;

            let members = &self.layer_devices[d];
            if members.is_empty() {
                continue;
            }
            let occupied_count = members.iter().filter(|&&i| decision.occupancy[i]).count();
            let per_device = match &states[d] {
                Some(s) if occupied_count > 0 => s.cycle_demand / T::of_usize(occupied_count),
                _ => T::zero(),
            };
            let pairs: Vec<(T, T)> =
                members.iter().map(|&i| (if decision.occupancy[i] { per_device } else { T::zero() }, self.scenario.devices[i].capacity_hz)).collect();
            b_tot = b_tot + load_balancing(&pairs)?;

            if let Some(s) = &states[d] {
                if s.servers > 0 {
                    let mean_cycles = if s.lambda > T::zero() { s.cycle_demand / s.lambda } else { T::zero() };
                    r_tot = r_tot + sharing_revenue(econ.beta1, econ.beta2, s.price, mean_cycles, s.capacity)?;
                }
            }
        }

        let o_ave = occupancy_average(&decision.occupancy);
        let h_ave = h_sum / T::of_usize(self.scenario.devices.len());
        Ok(ObjectiveVector { l_tot, e_tot, o_ave, h_ave, b_tot, r_tot })
    }

    /// Violation magnitudes. Only malformed decisions (wrong lengths, probabilities outside
    /// the simplex) are errors; inadmissible offload mass is reported as a violation.
    pub fn check_constraints(&self, decision: &AllocationDecision<T>) -> Result<ConstraintReport<T>> {
        decision.validate(self.scenario.tasks.len(), self.scenario.devices.len())?;
        let zero = T::zero();
        let mut report = ConstraintReport::default();

        let mut admissible = decision.layer_probs.clone();
        for (t, p) in admissible.iter_mut().enumerate() {
            for layer in Layer::ALL {
                if !self.sources[t].can_offload_to(layer) {
                    report.layer_order = report.layer_order + p[layer.index()];
                    p[layer.index()] = zero;
                }
            }
        }
        if !self.ordering_ok {
            report.layer_order = report.layer_order + T::one();
        }

        for d in &self.scenario.devices {
            if let (Some(p), Some(max)) = (d.tx_power_w, d.max_tx_power_w) {
                report.tx_power = report.tx_power + (p - max).max(zero);
            }
        }

        let lambda = layer_arrival_rates(&self.sources, &self.arrival_rates, &admissible)?;
        for layer in Layer::ALL {
            let d = layer.index();
            let occupied = self.layer_devices[d].iter().copied().filter(|&i| decision.occupancy[i]);
            let Some((servers, capacity, _, kappa, max_energy)) = self.means(occupied) else {
                report.service_rate = report.service_rate + lambda[d];
                continue;
            };
            let alpha = self.alpha.get(layer);
            let service = alpha * capacity * T::of_usize(servers);
            report.service_rate = report.service_rate + (lambda[d] - service).max(zero);

            let pool = LayerPool { servers, capacity_hz: capacity, arrival_rate: lambda[d], alpha };
            let rho = pool.utilisation();
            let queue = if rho < T::one() && lambda[d] > zero { erlang_c(servers, rho, self.variant)? / (service * (T::one() - rho)) } else { zero };
            for (t, task) in self.scenario.tasks.iter().enumerate() {
                let p = admissible[t][d];
                if p == zero {
                    continue;
                }
                let latency = queue + task.cycles / capacity;
                report.deadline = report.deadline + p * (latency - task.deadline_s).max(zero);
                let energy = kappa * task.cycles * capacity * capacity;
                report.energy = report.energy + p * (energy - max_energy).max(zero);
                report.capacity = report.capacity + p * (task.cycles - capacity * task.deadline_s).max(zero);
            }
        }
        Ok(report)
    }
}

pub fn evaluate_objectives<T: Scalar>(scenario: &Scenario<T>, decision: &AllocationDecision<T>) -> Result<ObjectiveVector<T>> {
    CpnModel::new(scenario.clone())?.evaluate_objectives(decision)
}

pub fn check_constraints<T: Scalar>(scenario: &Scenario<T>, decision: &AllocationDecision<T>) -> Result<ConstraintReport<T>> {
    CpnModel::new(scenario.clone())?.check_constraints(decision)
}
