//! Simulated binary crossover and polynomial mutation for real genes, uniform crossover and
//! bit flips for binary genes.

use rand::seq::SliceRandom;
use rand::Rng;
use serde::{Deserialize, Serialize};

use crate::moea::genome::{Genome, GenomeLayout};
use crate::Scalar;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct VariationParams<T> {
    /// Probability that a mating pair is recombined.
    pub crossover_prob: T,
    /// Per-gene mutation probability.
    pub mutation_prob: T,
    pub crossover_eta: T,
    pub mutation_eta: T,
}

/// Pairs parents at random and recombines/mutates them. Children take their parents' slots,
/// so with both probabilities at zero the output equals the input.
pub fn variation<T: Scalar, R: Rng + ?Sized>(
    parents: &[Genome<T>],
    layout: &GenomeLayout<T>,
    params: &VariationParams<T>,
    rng: &mut R,
) -> Vec<Genome<T>> {
    let mut offspring = parents.to_vec();
    let mut order: Vec<usize> = (0..parents.len()).collect();
    order.shuffle(rng);
    for pair in order.chunks(2) {
        if let [a, b] = *pair {
            if rng.gen::<f64>() < params.crossover_prob.as_f64() {
                let (left, right) = two_mut(&mut offspring, a, b);
                sbx(left, right, layout, params.crossover_eta, rng);
                uniform_bits(&mut left.bits, &mut right.bits, rng);
            }
        }
    }
    for child in &mut offspring {
        mutate(child, layout, params.mutation_prob, params.mutation_eta, rng);
        layout.repair(child);
    }
    offspring
}

fn two_mut<X>(v: &mut [X], a: usize, b: usize) -> (&mut X, &mut X) {
    assert_ne!(a, b);
    if a < b {
        let (l, r) = v.split_at_mut(b);
        (&mut l[a], &mut r[0])
    } else {
        let (l, r) = v.split_at_mut(a);
        (&mut r[0], &mut l[b])
    }
}

fn sbx<T: Scalar, R: Rng + ?Sized>(x: &mut Genome<T>, y: &mut Genome<T>, layout: &GenomeLayout<T>, eta: T, rng: &mut R) {
    let eta = eta.as_f64();
    for i in 0..layout.reals() {
        if rng.gen::<f64>() > 0.5 {
            continue;
        }
        let (x1, x2) = (x.reals[i].as_f64(), y.reals[i].as_f64());
        if (x1 - x2).abs() <= 1e-14 {
            continue;
        }
        let (lo, hi) = (layout.lower[i].as_f64(), layout.upper[i].as_f64());
        let (y1, y2) = if x1 < x2 { (x1, x2) } else { (x2, x1) };
        let u: f64 = rng.gen();

        let beta_q = |beta: f64| {
            let alpha = 2.0 - beta.powf(-(eta + 1.0));
            if u <= 1.0 / alpha {
                (u * alpha).powf(1.0 / (eta + 1.0))
            } else {
                (1.0 / (2.0 - u * alpha)).powf(1.0 / (eta + 1.0))
            }
        };
        let span = y2 - y1;
        let c1 = 0.5 * ((y1 + y2) - beta_q(1.0 + 2.0 * (y1 - lo) / span) * span);
        let c2 = 0.5 * ((y1 + y2) + beta_q(1.0 + 2.0 * (hi - y2) / span) * span);
        let (c1, c2) = (c1.clamp(lo, hi), c2.clamp(lo, hi));
        let (c1, c2) = if rng.gen::<bool>() { (c2, c1) } else { (c1, c2) };
        x.reals[i] = T::of(c1);
        y.reals[i] = T::of(c2);
    }
}

fn uniform_bits<R: Rng + ?Sized>(a: &mut [bool], b: &mut [bool], rng: &mut R) {
    for (x, y) in a.iter_mut().zip(b.iter_mut()) {
        if rng.gen::<bool>() {
            std::mem::swap(x, y);
        }
    }
}

fn mutate<T: Scalar, R: Rng + ?Sized>(g: &mut Genome<T>, layout: &GenomeLayout<T>, prob: T, eta: T, rng: &mut R) {
    let (prob, eta) = (prob.as_f64(), eta.as_f64());
    for i in 0..layout.reals() {
        if rng.gen::<f64>() >= prob {
            continue;
        }
        let (lo, hi) = (layout.lower[i].as_f64(), layout.upper[i].as_f64());
        if hi <= lo {
            continue;
        }
        let x = g.reals[i].as_f64();
        let (d1, d2) = ((x - lo) / (hi - lo), (hi - x) / (hi - lo));
        let u: f64 = rng.gen();
        let pow = 1.0 / (eta + 1.0);
        let dq = if u < 0.5 {
            let v = 2.0 * u + (1.0 - 2.0 * u) * (1.0 - d1).powf(eta + 1.0);
            v.powf(pow) - 1.0
        } else {
            let v = 2.0 * (1.0 - u) + 2.0 * (u - 0.5) * (1.0 - d2).powf(eta + 1.0);
            1.0 - v.powf(pow)
        };
        g.reals[i] = T::of((x + dq * (hi - lo)).clamp(lo, hi));
    }
    for b in &mut g.bits {
        if rng.gen::<f64>() < prob {
            *b = !*b;
        }
    }
}
