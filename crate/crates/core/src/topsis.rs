//! Entropy-weighted TOPSIS for choosing one alternative from a set of trade-offs.

use serde::{Deserialize, Serialize};

use crate::{Error, Result, Scalar};

/// Alternatives in rows, criteria in columns. `benefit[j]` marks criteria where larger is
/// better; the rest are costs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DecisionMatrix<T> {
    rows: Vec<Vec<T>>,
    benefit: Vec<bool>,
}

impl<T: Scalar> DecisionMatrix<T> {
    pub fn new(rows: Vec<Vec<T>>, benefit: Vec<bool>) -> Result<Self> {
        if rows.len() < 2 {
            return Err(Error::InvalidInput(format!("need at least two alternatives, got {}", rows.len())));
        }
        if benefit.is_empty() {
            return Err(Error::InvalidInput("need at least one criterion".into()));
        }
        for r in &rows {
            if r.len() != benefit.len() {
                return Err(Error::DimensionMismatch { expected: benefit.len(), found: r.len() });
            }
            if r.iter().any(|v| !v.is_finite()) {
                return Err(Error::InvalidInput("matrix entries must be finite".into()));
            }
        }
        Ok(Self { rows, benefit })
    }

    pub fn rows(&self) -> &[Vec<T>] {
        &self.rows
    }

    pub fn benefit(&self) -> &[bool] {
        &self.benefit
    }

    pub fn alternatives(&self) -> usize {
        self.rows.len()
    }

    pub fn criteria(&self) -> usize {
        self.benefit.len()
    }

    fn column(&self, j: usize) -> impl Iterator<Item = T> + '_ {
        self.rows.iter().map(move |r| r[j])
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EntropyWeights<T> {
    pub weights: Vec<T>,
    /// Set when no criterion varied and the weights fell back to uniform.
    pub uniform_fallback: bool,
}

/// Objective weights from the information content of each criterion.
///
/// Columns are min–max normalised in their preferred direction, turned into distributions,
/// and weighted by `1 − e_j` with `e_j` the entropy normalised by `ln n`. Constant columns get
/// zero weight.
pub fn entropy_weights<T: Scalar>(matrix: &DecisionMatrix<T>) -> EntropyWeights<T> {
    let n = matrix.alternatives();
    let k = T::one() / T::of_usize(n).ln();
    let mut raw = vec![T::zero(); matrix.criteria()];
    let mut varied = vec![false; matrix.criteria()];
    for (j, w) in raw.iter_mut().enumerate() {
        let lo = matrix.column(j).fold(T::infinity(), T::min);
        let hi = matrix.column(j).fold(T::neg_infinity(), T::max);
        if !(hi > lo) {
            continue;
        }
        varied[j] = true;
        let scaled: Vec<T> = matrix.column(j).map(|x| if matrix.benefit[j] { (x - lo) / (hi - lo) } else { (hi - x) / (hi - lo) }).collect();
        let total: T = scaled.iter().copied().sum();
        let entropy = -k
            * scaled
                .iter()
                .map(|&r| {
                    let p = r / total;
                    if p > T::zero() {
                        p * p.ln()
                    } else {
                        T::zero()
                    }
                })
                .sum::<T>();
        *w = (T::one() - entropy).max(T::zero());
    }
    let total: T = raw.iter().copied().sum();
    if total > T::zero() {
        return EntropyWeights { weights: raw.into_iter().map(|w| w / total).collect(), uniform_fallback: false };
    }
    let count = varied.iter().filter(|v| **v).count();
    if count > 0 {
        let share = T::one() / T::of_usize(count);
        return EntropyWeights { weights: varied.iter().map(|&v| if v { share } else { T::zero() }).collect(), uniform_fallback: false };
    }
    EntropyWeights { weights: vec![T::one() / T::of_usize(matrix.criteria()); matrix.criteria()], uniform_fallback: true }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ranking<T> {
    /// Alternative indices, best first.
    pub order: Vec<usize>,
    /// Relative closeness per alternative, in input order.
    pub closeness: Vec<T>,
}

impl<T> Ranking<T> {
    pub fn best(&self) -> usize {
        self.order[0]
    }
}

/// Ranks alternatives by relative closeness `D⁻ / (D⁺ + D⁻)` to the positive ideal on the
/// vector-normalised, weighted matrix. Ties keep input order.
pub fn topsis_rank<T: Scalar>(matrix: &DecisionMatrix<T>, weights: &[T]) -> Result<Ranking<T>> {
    let m = matrix.criteria();
    if weights.len() != m {
        return Err(Error::DimensionMismatch { expected: m, found: weights.len() });
    }
    if weights.iter().any(|w| !(*w >= T::zero())) {
        return Err(Error::InvalidInput("weights must be non-negative".into()));
    }
    let sum: T = weights.iter().copied().sum();
    if (sum - T::one()).abs() > T::unit_tolerance() {
        return Err(Error::InvalidInput(format!("weights sum to {sum}, expected 1")));
    }
    let norms: Vec<T> = (0..m).map(|j| matrix.column(j).map(|x| x * x).sum::<T>().sqrt()).collect();
    let weighted: Vec<Vec<T>> =
        matrix.rows.iter().map(|r| (0..m).map(|j| if norms[j] > T::zero() { weights[j] * r[j] / norms[j] } else { T::zero() }).collect()).collect();
    let mut best = vec![T::zero(); m];
    let mut worst = vec![T::zero(); m];
    for j in 0..m {
        let lo = weighted.iter().map(|r| r[j]).fold(T::infinity(), T::min);
        let hi = weighted.iter().map(|r| r[j]).fold(T::neg_infinity(), T::max);
        (best[j], worst[j]) = if matrix.benefit[j] { (hi, lo) } else { (lo, hi) };
    }
    let dist = |r: &[T], p: &[T]| r.iter().zip(p).map(|(&a, &b)| (a - b) * (a - b)).sum::<T>().sqrt();
    let closeness: Vec<T> = weighted
        .iter()
        .map(|r| {
            let (plus, minus) = (dist(r, &best), dist(r, &worst));
            if plus + minus > T::zero() {
                minus / (plus + minus)
            } else {
                T::one()
            }
        })
        .collect();
    let mut order: Vec<usize> = (0..matrix.alternatives()).collect();
    order.sort_by(|&a, &b| closeness[b].partial_cmp(&closeness[a]).expect("finite closeness").then(a.cmp(&b)));
    Ok(Ranking { order, closeness })
}

/// Entropy weights followed by TOPSIS.
pub fn select<T: Scalar>(matrix: &DecisionMatrix<T>) -> Result<(EntropyWeights<T>, Ranking<T>)> {
    let w = entropy_weights(matrix);
    let r = topsis_rank(matrix, &w.weights)?;
    Ok((w, r))
}
