//! Straight-line reference implementations used to cross-check the library.
#![allow(dead_code)]

use std::cmp::Reverse;
use std::collections::BinaryHeap;

use cpnshare_core::cpn::{Layer, Scenario};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Erlang C as printed, by direct summation with explicit factorials.
pub fn erlang_c_direct(n: usize, rho: f64) -> f64 {
    let a = n as f64 * rho;
    let fact = |k: usize| (1..=k).map(|i| i as f64).product::<f64>();
    let head: f64 = (0..n).map(|k| a.powi(k as i32) / fact(k)).sum();
    let top = a.powi(n as i32) / fact(n);
    top / (head + top / (1.0 - rho))
}

/// Mean wait in queue of a FCFS M/M/c queue, estimated by simulation.
pub fn mmc_mean_wait(servers: usize, lambda: f64, mu: f64, arrivals: usize, warmup: usize, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut exp = |rate: f64| -(1.0 - rng.gen::<f64>()).ln() / rate;
    // Next-free time per server; bit patterns of non-negative floats sort like the values.
    let mut free: BinaryHeap<Reverse<u64>> = (0..servers).map(|_| Reverse(0f64.to_bits())).collect();
    let mut clock = 0.0;
    let mut total = 0.0;
    let mut counted = 0usize;
    for k in 0..arrivals + warmup {
        clock += exp(lambda);
        let Reverse(bits) = free.pop().unwrap();
        let start = f64::from_bits(bits).max(clock);
        let service = exp(mu);
        free.push(Reverse((start + service).to_bits()));
        if k >= warmup {
            total += start - clock;
            counted += 1;
        }
    }
    total / counted as f64
}

/// Front index of every point under Pareto dominance, by repeated O(n²M) scans.
pub fn brute_force_fronts(points: &[Vec<f64>], dominates: impl Fn(usize, usize) -> bool) -> Vec<Vec<usize>> {
    let n = points.len();
    let mut left: Vec<usize> = (0..n).collect();
    let mut fronts = Vec::new();
    while !left.is_empty() {
        let front: Vec<usize> = left.iter().copied().filter(|&i| !left.iter().any(|&j| dominates(j, i))).collect();
        left.retain(|i| !front.contains(i));
        fronts.push(front);
    }
    fronts
}

pub fn pareto(a: &[f64], b: &[f64]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y) && a.iter().zip(b).any(|(x, y)| x < y)
}

/// Exact pure-diversity recursion: PD(X) = max_s PD(X − s) + min_{t ∈ X−s} d(s, t).
pub fn pd_recursive(points: &[Vec<f64>]) -> f64 {
    fn diss(a: &[f64], b: &[f64]) -> f64 {
        a.iter().zip(b).map(|(x, y)| (x - y).abs().powf(0.1)).sum::<f64>().powf(10.0)
    }
    fn go(points: &[Vec<f64>], set: &[usize]) -> f64 {
        if set.len() < 2 {
            return 0.0;
        }
        set.iter()
            .map(|&s| {
                let rest: Vec<usize> = set.iter().copied().filter(|&t| t != s).collect();
                let near = rest.iter().map(|&t| diss(&points[s], &points[t])).fold(f64::INFINITY, f64::min);
                go(points, &rest) + near
            })
            .fold(f64::NEG_INFINITY, f64::max)
    }
    go(points, &(0..points.len()).collect::<Vec<_>>())
}

/// The six raw objectives of a decision, written without the library's helpers.
/// Returns `None` when some loaded layer has no occupied device or an unstable queue.
pub fn objectives_oracle(s: &Scenario<f64>, probs: &[[f64; 3]], occ: &[bool]) -> Option<[f64; 6]> {
    let d_count = s.devices.len();
    let layer_of = |i: usize| s.devices[i].layer;
    let src_of = |t: usize| s.devices.iter().position(|d| d.id == s.tasks[t].source_device).unwrap();

    // NOMA rates over users sorted by gain.
    let mut users: Vec<usize> = (0..d_count).filter(|&i| layer_of(i) == Layer::User).collect();
    users.sort_by(|&a, &b| s.devices[a].channel_gain.partial_cmp(&s.devices[b].channel_gain).unwrap().then(a.cmp(&b)));
    let mut rate = vec![0.0; d_count];
    for (pos, &u) in users.iter().enumerate() {
        let mut interference = 0.0;
        for &v in &users[pos + 1..] {
            interference += s.devices[v].tx_power_w.unwrap() * s.devices[v].channel_gain.unwrap();
        }
        let sig = s.devices[u].tx_power_w.unwrap() * s.devices[u].channel_gain.unwrap();
        rate[u] = s.channel.bandwidth_hz * (1.0 + sig / (s.channel.noise_power_w + interference)).log2();
    }

    let mean_cycles = s.tasks.iter().map(|t| t.cycles).sum::<f64>() / s.tasks.len() as f64;
    let alpha = |l: Layer| s.economics.alpha.map(|a| a.get(l)).unwrap_or(1.0 / mean_cycles);

    let mut lam = [0.0; 3];
    let mut demand = [0.0; 3];
    for (t, task) in s.tasks.iter().enumerate() {
        for d in 0..3 {
            lam[d] += task.arrival_rate * probs[t][d];
            demand[d] += task.arrival_rate * probs[t][d] * task.cycles;
        }
    }

    struct Agg {
        n: usize,
        cap: f64,
        price: f64,
        kappa: f64,
        wait: f64,
    }
    let mut agg: Vec<Option<Agg>> = Vec::new();
    for (d, layer) in Layer::ALL.into_iter().enumerate() {
        let occ_idx: Vec<usize> = (0..d_count).filter(|&i| layer_of(i) == layer && occ[i]).collect();
        if occ_idx.is_empty() {
            if lam[d] > 0.0 {
                return None;
            }
            agg.push(None);
            continue;
        }
        let n = occ_idx.len();
        let avg = |f: &dyn Fn(usize) -> f64| occ_idx.iter().map(|&i| f(i)).sum::<f64>() / n as f64;
        let cap = avg(&|i| s.devices[i].capacity_hz);
        let mu_total = n as f64 * alpha(layer) * cap;
        let rho = lam[d] / mu_total;
        if rho >= 1.0 {
            return None;
        }
        let wait = if lam[d] == 0.0 { 0.0 } else { erlang_c_direct(n, rho) * rho / (lam[d] * (1.0 - rho)) };
        agg.push(Some(Agg { n, cap, price: avg(&|i| s.devices[i].price), kappa: avg(&|i| s.devices[i].kappa), wait }));
    }

    let (mut l, mut e) = (0.0, 0.0);
    for (t, task) in s.tasks.iter().enumerate() {
        for d in 0..3 {
            let p = probs[t][d];
            if p == 0.0 {
                continue;
            }
            let a = agg[d].as_ref().unwrap();
            l += p * (a.wait + task.cycles / a.cap);
            e += p * a.kappa * task.cycles * a.cap * a.cap;
        }
        let src = src_of(t);
        if layer_of(src) == Layer::User {
            let lat = task.data_kb * 8192.0 / rate[src];
            let mass: f64 = probs[t].iter().sum();
            l += mass * lat;
            e += mass * s.devices[src].tx_power_w.unwrap() * lat;
        }
    }

    let o = occ.iter().filter(|b| **b).count() as f64 / d_count as f64;

    let mut h = 0.0;
    for d in 0..3 {
        for p in probs {
            if p[d] > 0.0 {
                h -= p[d] * p[d].log2();
            }
        }
    }
    h /= d_count as f64;

    let mut b = 0.0;
    let mut r = 0.0;
    for (d, layer) in Layer::ALL.into_iter().enumerate() {
        let members: Vec<usize> = (0..d_count).filter(|&i| layer_of(i) == layer).collect();
        if members.is_empty() {
            continue;
        }
        let n_occ = members.iter().filter(|&&i| occ[i]).count();
        let mut ss = 0.0;
        for &i in &members {
            let dem = if occ[i] { demand[d] / n_occ as f64 } else { 0.0 };
            ss += (dem - s.devices[i].capacity_hz).powi(2);
        }
        b += (ss / members.len() as f64).sqrt();
        if let Some(a) = &agg[d] {
            let xi = if lam[d] > 0.0 { demand[d] / lam[d] } else { 0.0 };
            let _ = a.n;
            r += (1.0 + s.economics.beta1 * a.price * xi / a.cap + s.economics.beta2 * a.cap / 1e9).ln();
        }
    }
    Some([l, e, o, h, b, r])
}
