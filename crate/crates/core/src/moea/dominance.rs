//! Pareto, strengthened (SDR) and kernel-distance (KDR) dominance.
//!
//! SDR and KDR compare a convergence measure `d` (Euclidean or kernel distance to the
//! ideal point) and penalise pairs that lie in different niches: `x1` dominates `x2` when
//! `d(x1) < d(x2)` if their angle is within the niche threshold `θ̄`, and when
//! `d(x1)·θ/θ̄ < d(x2)` otherwise.

use std::cell::Cell;

use serde::{Deserialize, Serialize};

use crate::moea::sorting::DominanceRelation;
use crate::{Error, Result, Scalar};

/// Smallest niche threshold used in the penalised branch.
pub const DEFAULT_THETA_FLOOR: f64 = 1e-6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Relation {
    Pareto,
    Sdr,
    Kdr,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DominanceConfig<T> {
    pub relation: Relation,
    /// Kernel bandwidth.
    pub sigma: T,
    /// Feasible members dominate infeasible ones; among infeasible ones the smaller
    /// violation wins.
    pub constrained: bool,
    pub theta_floor: T,
}

impl<T: Scalar> DominanceConfig<T> {
    pub fn new(relation: Relation) -> Self {
        Self { relation, sigma: T::one(), constrained: true, theta_floor: T::of(DEFAULT_THETA_FLOOR) }
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.sigma > T::zero()) || !self.sigma.is_finite() {
            return Err(Error::InvalidConfig(format!("sigma must be positive, got {}", self.sigma)));
        }
        if !(self.theta_floor > T::zero()) {
            return Err(Error::InvalidConfig("theta floor must be positive".into()));
        }
        Ok(())
    }
}

fn check_len<T>(a: &[T], b: &[T]) -> Result<()> {
    if a.len() != b.len() {
        return Err(Error::DimensionMismatch { expected: a.len(), found: b.len() });
    }
    Ok(())
}

fn squared_distance<T: Scalar>(f: &[T], ideal: &[T]) -> T {
    f.iter().zip(ideal).map(|(&a, &b)| (a - b) * (a - b)).sum()
}

/// `sqrt(2 − 2·exp(−‖f − ideal‖² / 2σ²))`, in `[0, √2)`.
pub fn kernel_distance<T: Scalar>(f: &[T], ideal: &[T], sigma: T) -> Result<T> {
    check_len(f, ideal)?;
    Ok(kernel_of_squared(squared_distance(f, ideal), sigma))
}

#[inline]
fn kernel_of_squared<T: Scalar>(sq: T, sigma: T) -> T {
    // expm1 keeps precision for points close to the ideal.
    (-T::of(2.0) * (-sq / (T::of(2.0) * sigma * sigma)).exp_m1()).sqrt()
}

pub fn euclidean_distance<T: Scalar>(f: &[T], ideal: &[T]) -> Result<T> {
    check_len(f, ideal)?;
    Ok(squared_distance(f, ideal).sqrt())
}

/// Angle between `f1 − ideal` and `f2 − ideal`. Lies in `[0, π/2]` for vectors in the
/// non-negative orthant.
pub fn pairwise_angle<T: Scalar>(f1: &[T], f2: &[T], ideal: &[T]) -> Result<T> {
    check_len(f1, ideal)?;
    check_len(f2, ideal)?;
    let mut dot = T::zero();
    let mut n1 = T::zero();
    let mut n2 = T::zero();
    for ((&a, &b), &z) in f1.iter().zip(f2).zip(ideal) {
        let (a, b) = (a - z, b - z);
        dot = dot + a * b;
        n1 = n1 + a * a;
        n2 = n2 + b * b;
    }
    if n1 == T::zero() || n2 == T::zero() {
        return Err(Error::DegenerateAngle);
    }
    Ok(angle_from(dot, n1.sqrt() * n2.sqrt()))
}

#[inline]
fn angle_from<T: Scalar>(dot: T, norms: T) -> T {
    (dot / norms).max(-T::one()).min(T::one()).acos()
}

/// Angle with a member at the ideal point treated as 0.
fn angle_or_zero<T: Scalar>(f1: &[T], f2: &[T], ideal: &[T]) -> Result<T> {
    match pairwise_angle(f1, f2, ideal) {
        Err(Error::DegenerateAngle) => Ok(T::zero()),
        other => other,
    }
}

/// The `⌊|P|/2⌋`-th smallest of each member's minimum angle to the others.
pub fn niche_threshold<T: Scalar>(objectives: &[Vec<T>], ideal: &[T]) -> Result<T> {
    let n = objectives.len();
    if n < 2 {
        return Err(Error::PopulationTooSmall(n));
    }
    let mut minima = vec![T::infinity(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            let a = angle_or_zero(&objectives[i], &objectives[j], ideal)?;
            minima[i] = minima[i].min(a);
            minima[j] = minima[j].min(a);
        }
    }
    minima.sort_by(|a, b| a.partial_cmp(b).expect("angles are not NaN"));
    Ok(minima[n / 2 - 1])
}

#[inline]
fn penalised_dominates<T: Scalar>(d1: T, d2: T, angle: T, theta_bar: T, floor: T) -> bool {
    let theta_bar = theta_bar.max(floor);
    if angle <= theta_bar {
        d1 < d2
    } else {
        d1 * (angle / theta_bar) < d2
    }
}

pub fn kdr_dominates<T: Scalar>(x1: &[T], x2: &[T], theta_bar: T, sigma: T, ideal: &[T]) -> bool {
    if x1.len() != x2.len() || x1.len() != ideal.len() {
        return false;
    }
    let angle = angle_or_zero(x1, x2, ideal).unwrap_or_else(|_| T::zero());
    let d1 = kernel_of_squared(squared_distance(x1, ideal), sigma);
    let d2 = kernel_of_squared(squared_distance(x2, ideal), sigma);
    penalised_dominates(d1, d2, angle, theta_bar, T::of(DEFAULT_THETA_FLOOR))
}

pub fn sdr_dominates<T: Scalar>(x1: &[T], x2: &[T], theta_bar: T, ideal: &[T]) -> bool {
    if x1.len() != x2.len() || x1.len() != ideal.len() {
        return false;
    }
    let angle = angle_or_zero(x1, x2, ideal).unwrap_or_else(|_| T::zero());
    let d1 = squared_distance(x1, ideal).sqrt();
    let d2 = squared_distance(x2, ideal).sqrt();
    penalised_dominates(d1, d2, angle, theta_bar, T::of(DEFAULT_THETA_FLOOR))
}

/// Componentwise no worse and strictly better somewhere (minimisation).
pub fn pareto_dominates<T: Scalar>(x1: &[T], x2: &[T]) -> bool {
    let mut strictly = false;
    for (&a, &b) in x1.iter().zip(x2) {
        if a > b {
            return false;
        }
        if a < b {
            strictly = true;
        }
    }
    strictly
}

/// A dominance relation bound to one population: objectives are min–max normalised
/// (on the feasible members when there are any), and the ideal point, distances and niche
/// threshold are computed once.
#[derive(Debug)]
pub struct PreparedDominance<T> {
    config: DominanceConfig<T>,
    normalized: Vec<Vec<T>>,
    norms: Vec<T>,
    distance: Vec<T>,
    violation: Vec<T>,
    theta_bar: T,
    comparisons: Cell<u64>,
}

impl<T: Scalar> PreparedDominance<T> {
    pub fn new(objectives: &[Vec<T>], violations: &[T], config: DominanceConfig<T>) -> Result<Self> {
        config.validate()?;
        if objectives.len() != violations.len() {
            return Err(Error::DimensionMismatch { expected: objectives.len(), found: violations.len() });
        }
        let m = objectives.first().map_or(0, Vec::len);
        if let Some(bad) = objectives.iter().find(|o| o.len() != m) {
            return Err(Error::DimensionMismatch { expected: m, found: bad.len() });
        }
        let feasible: Vec<usize> = (0..objectives.len()).filter(|&i| violations[i] <= T::zero()).collect();
        let basis: Vec<usize> = if config.constrained && !feasible.is_empty() { feasible } else { (0..objectives.len()).collect() };

        let mut ideal = vec![T::infinity(); m];
        let mut nadir = vec![T::neg_infinity(); m];
        for &i in &basis {
            for k in 0..m {
                ideal[k] = ideal[k].min(objectives[i][k]);
                nadir[k] = nadir[k].max(objectives[i][k]);
            }
        }
        let tiny = T::of(1e-12);
        let range: Vec<T> = (0..m).map(|k| if nadir[k] - ideal[k] > tiny { nadir[k] - ideal[k] } else { T::one() }).collect();
        let normalized: Vec<Vec<T>> = objectives.iter().map(|o| (0..m).map(|k| (o[k] - ideal[k]) / range[k]).collect()).collect();
        let origin = vec![T::zero(); m];
        let norms: Vec<T> = normalized.iter().map(|v| squared_distance(v, &origin).sqrt()).collect();
        let distance = match config.relation {
            Relation::Kdr => normalized.iter().map(|v| kernel_of_squared(squared_distance(v, &origin), config.sigma)).collect(),
            _ => norms.clone(),
        };
        let theta_bar = if config.relation == Relation::Pareto || basis.len() < 2 {
            config.theta_floor
        } else {
            let subset: Vec<Vec<T>> = basis.iter().map(|&i| normalized[i].clone()).collect();
            niche_threshold(&subset, &origin)?.max(config.theta_floor)
        };
        Ok(Self { config, normalized, norms, distance, violation: violations.to_vec(), theta_bar, comparisons: Cell::new(0) })
    }

    pub fn theta_bar(&self) -> T {
        self.theta_bar
    }

    pub fn normalized(&self) -> &[Vec<T>] {
        &self.normalized
    }

    /// Number of dominance checks answered so far.
    pub fn comparisons(&self) -> u64 {
        self.comparisons.get()
    }

    fn angle(&self, i: usize, j: usize) -> T {
        let norms = self.norms[i] * self.norms[j];
        if norms == T::zero() {
            return T::zero();
        }
        let dot: T = self.normalized[i].iter().zip(&self.normalized[j]).map(|(&a, &b)| a * b).sum();
        angle_from(dot, norms)
    }
}

impl<T: Scalar> DominanceRelation for PreparedDominance<T> {
    fn len(&self) -> usize {
        self.normalized.len()
    }

    fn dominates(&self, i: usize, j: usize) -> bool {
        self.comparisons.set(self.comparisons.get() + 1);
        if i == j {
            return false;
        }
        if self.config.constrained {
            let (vi, vj) = (self.violation[i], self.violation[j]);
            let (fi, fj) = (vi <= T::zero(), vj <= T::zero());
            match (fi, fj) {
                (true, false) => return true,
                (false, true) => return false,
                (false, false) => return vi < vj,
                (true, true) => {}
            }
        }
        match self.config.relation {
            Relation::Pareto => pareto_dominates(&self.normalized[i], &self.normalized[j]),
            Relation::Sdr | Relation::Kdr => {
                penalised_dominates(self.distance[i], self.distance[j], self.angle(i, j), self.theta_bar, self.config.theta_floor)
            }
        }
    }
}
