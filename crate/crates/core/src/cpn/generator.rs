use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::cpn::types::{ChannelParams, Device, Economics, Layer, PerLayer, Scenario, Task};
use crate::Scalar;

/// Parameters for synthetic scenarios. Defaults describe the 300/200/100-device network.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct GeneratorConfig {
    pub devices: PerLayer<usize>,
    /// Uniform capacity range per layer, cycles/s.
    pub capacity_hz: PerLayer<(f64, f64)>,
    pub price: PerLayer<f64>,
    pub max_energy_j: PerLayer<f64>,
    pub kappa: f64,
    pub tx_power_dbm: (f64, f64),
    pub max_tx_power_w: f64,
    pub antenna_gain_dbi: f64,
    pub noise_dbm: f64,
    pub bandwidth_hz: f64,
    /// Tasks generated per user device and per edge device.
    pub tasks_per_user: f64,
    pub tasks_per_edge: f64,
    pub arrival_rate: f64,
    pub data_kb: (f64, f64),
    pub cycles_per_byte: f64,
    pub deadline_s: (f64, f64),
    pub beta1: f64,
    pub beta2: f64,
}

impl Default for GeneratorConfig {
    fn default() -> Self {
        Self {
            devices: PerLayer { user: 300, edge: 200, cloud: 100 },
            capacity_hz: PerLayer { user: (0.6e9, 10e9), edge: (10e9, 1e12), cloud: (1.2e12, 2e12) },
            price: PerLayer { user: 0.1, edge: 1.0, cloud: 2.0 },
            max_energy_j: PerLayer { user: 5.0, edge: 1e5, cloud: 1e6 },
            kappa: 1e-29,
            tx_power_dbm: (20.0, 30.0),
            max_tx_power_w: 1.0,
            antenna_gain_dbi: 2.15,
            noise_dbm: -97.0,
            bandwidth_hz: 20e6,
            tasks_per_user: 0.1,
            tasks_per_edge: 0.05,
            arrival_rate: 100.0,
            data_kb: (500.0, 3000.0),
            cycles_per_byte: 1000.0,
            deadline_s: (1.0, 3.0),
            beta1: 0.6,
            beta2: 0.4,
        }
    }
}

pub fn dbm_to_watts(dbm: f64) -> f64 {
    10f64.powf((dbm - 30.0) / 10.0)
}

impl GeneratorConfig {
    /// The 60/40/20-device network used for quick allocation experiments.
    pub fn reduced() -> Self {
        Self { devices: PerLayer { user: 60, edge: 40, cloud: 20 }, ..Self::default() }
    }

    pub fn generate<T: Scalar>(&self, seed: u64) -> Scenario<T> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let gain = 10f64.powf(self.antenna_gain_dbi / 10.0);
        let mut devices = Vec::new();
        let mut by_layer: [Vec<String>; 3] = Default::default();
        for layer in Layer::ALL {
            let (lo, hi) = self.capacity_hz.get(layer);
            for i in 0..self.devices.get(layer) {
                let id = format!("{}{}", &layer.to_string()[..1], i);
                let user = layer == Layer::User;
                let tx_power = user.then(|| dbm_to_watts(rng.gen_range(self.tx_power_dbm.0..=self.tx_power_dbm.1)));
                let channel_gain = user.then(|| gain * exp1(&mut rng));
                devices.push(Device {
                    id: id.clone(),
                    layer,
                    capacity_hz: T::of(rng.gen_range(lo..=hi)),
                    price: T::of(self.price.get(layer)),
                    kappa: T::of(self.kappa),
                    max_energy_j: T::of(self.max_energy_j.get(layer)),
                    tx_power_w: tx_power.map(T::of),
                    max_tx_power_w: user.then(|| T::of(self.max_tx_power_w)),
                    channel_gain: channel_gain.map(T::of),
                });
                by_layer[layer.index()].push(id);
            }
        }
        let mut tasks = Vec::new();
        for (layer, per) in [(Layer::User, self.tasks_per_user), (Layer::Edge, self.tasks_per_edge)] {
            let pool = &by_layer[layer.index()];
            let count = ((pool.len() as f64 * per).round() as usize).min(pool.len());
            for src in sample(&mut rng, pool.len(), count).into_vec() {
                let data_kb = rng.gen_range(self.data_kb.0..=self.data_kb.1);
                tasks.push(Task {
                    id: format!("t{}", tasks.len()),
                    source_device: pool[src].clone(),
                    data_kb: T::of(data_kb),
                    cycles: T::of(data_kb * 1024.0 * self.cycles_per_byte),
                    deadline_s: T::of(rng.gen_range(self.deadline_s.0..=self.deadline_s.1)),
                    arrival_rate: T::of(self.arrival_rate),
                });
            }
        }
        Scenario {
            devices,
            tasks,
            channel: ChannelParams { bandwidth_hz: T::of(self.bandwidth_hz), noise_power_w: T::of(dbm_to_watts(self.noise_dbm)) },
            economics: Economics { beta1: T::of(self.beta1), beta2: T::of(self.beta2), alpha: None },
        }
    }
}

/// Unit-mean exponential sample by inversion (Rayleigh power fading).
fn exp1<R: Rng + ?Sized>(rng: &mut R) -> f64 {
    let u: f64 = rng.gen();
    -(1.0 - u).ln()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn default_scenario_shape() {
        let s: Scenario<f64> = GeneratorConfig::default().generate(7);
        s.validate().unwrap();
        assert_eq!(s.devices.len(), 600);
        assert_eq!(s.layer_count(Layer::User), 300);
        assert_eq!(s.layer_count(Layer::Edge), 200);
        assert_eq!(s.layer_count(Layer::Cloud), 100);
        assert_eq!(s.tasks.len(), 40);
        assert!(s.capacity_ordering_holds());
        assert!((s.channel.noise_power_w - 1.995e-13).abs() < 1e-15);
        assert_eq!(s.channel.bandwidth_hz, 20e6);
        for d in s.devices.iter().filter(|d| d.layer == Layer::User) {
            let p = d.tx_power_w.unwrap();
            assert!((0.1..=1.0).contains(&p));
        }
    }

    #[test]
    fn generation_is_seeded() {
        let a: Scenario<f64> = GeneratorConfig::reduced().generate(3);
        let b: Scenario<f64> = GeneratorConfig::reduced().generate(3);
        let c: Scenario<f64> = GeneratorConfig::reduced().generate(4);
        assert_eq!(a, b);
        assert_ne!(a, c);
        assert_eq!(a.devices.len(), 120);
    }

    #[test]
    fn json_round_trip() {
        let s: Scenario<f64> = GeneratorConfig::reduced().generate(1);
        let back = Scenario::<f64>::from_json(&s.to_json()).unwrap();
        assert_eq!(s, back);
    }
}
