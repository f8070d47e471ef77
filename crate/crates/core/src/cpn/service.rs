//! Occupancy, privacy entropy, load balancing and sharing revenue.

use crate::{Error, Result, Scalar};

pub fn occupancy_total(bits: &[bool]) -> usize {
    bits.iter().filter(|b| **b).count()
}

/// Fraction of occupied devices; zero for an empty slice.
pub fn occupancy_average<T: Scalar>(bits: &[bool]) -> T {
    if bits.is_empty() {
        return T::zero();
    }
    T::of_usize(occupancy_total(bits)) / T::of_usize(bits.len())
}

/// `−Σ p·log2 p` with `0·log 0 = 0`.
pub fn privacy_entropy<T: Scalar>(probs: &[T]) -> Result<T> {
    let mut h = T::zero();
    for &p in probs {
        if p.is_nan() || p < T::zero() || p > T::one() {
            return Err(Error::InvalidInput(format!("probability {p} outside [0, 1]")));
        }
        if p > T::zero() {
            h = h - p * p.log2();
        }
    }
    Ok(h)
}

/// Root mean square of `demand − capacity` over `(demand, capacity)` pairs, cycles/s.
pub fn load_balancing<T: Scalar>(devices: &[(T, T)]) -> Result<T> {
    if devices.is_empty() {
        return Err(Error::InvalidInput("load balancing needs at least one device".into()));
    }
    let ss: T = devices.iter().map(|&(d, c)| (d - c) * (d - c)).sum();
    Ok((ss / T::of_usize(devices.len())).sqrt())
}

/// `ln(1 + β1·ψ·ξ/ς + β2·ς_GHz)`.
pub fn sharing_revenue<T: Scalar>(beta1: T, beta2: T, price: T, cycles: T, capacity_hz: T) -> Result<T> {
    if !(capacity_hz > T::zero()) {
        return Err(Error::DivisionGuard("capacity must be positive"));
    }
    let busy_s = cycles / capacity_hz;
    Ok((T::one() + beta1 * price * busy_s + beta2 * capacity_hz / T::of(1e9)).ln())
}
