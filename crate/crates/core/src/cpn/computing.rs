//! Per-layer arrival rates, the M/M/c queue and execution energy.

use crate::cpn::types::Layer;
use crate::{Error, Result, Scalar};

/// Which Erlang C expression to evaluate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ErlangVariant {
    /// `(Nρ)^N/N!` over `Σ_{k<N} (Nρ)^k/k! + (Nρ)^N/(N!(1−ρ))`. Equals the textbook value
    /// times `(1 − ρ)`.
    #[default]
    AsPrinted,
    /// The textbook probability that an arrival waits.
    Textbook,
}

/// Expected arrivals per second at each layer (user, edge, cloud).
///
/// `sources[t]` is the layer task `t` originates from. Probability mass towards a layer the
/// source may not offload to is rejected.
pub fn layer_arrival_rates<T: Scalar>(sources: &[Layer], arrival_rates: &[T], probs: &[[T; 3]]) -> Result<[T; 3]> {
    if sources.len() != probs.len() || arrival_rates.len() != probs.len() {
        return Err(Error::DimensionMismatch { expected: probs.len(), found: sources.len().min(arrival_rates.len()) });
    }
    let mut lambda = [T::zero(); 3];
    for ((src, &rate), p) in sources.iter().zip(arrival_rates).zip(probs) {
        for dest in Layer::ALL {
            let mass = p[dest.index()];
            if mass > T::zero() && !src.can_offload_to(dest) {
                return Err(Error::InvalidDecision(format!("offload from {src} to {dest} is not allowed")));
            }
            lambda[dest.index()] = lambda[dest.index()] + rate * mass;
        }
    }
    Ok(lambda)
}

/// Erlang C for `n_servers` at utilisation `rho`, via the Erlang B recurrence
/// `B_k = a·B_{k−1} / (k + a·B_{k−1})` with offered load `a = Nρ`.
pub fn erlang_c<T: Scalar>(n_servers: usize, rho: T, variant: ErlangVariant) -> Result<T> {
    if n_servers == 0 {
        return Err(Error::InvalidInput("at least one server is required".into()));
    }
    if rho.is_nan() || rho < T::zero() {
        return Err(Error::InvalidInput(format!("utilisation must be non-negative, got {rho}")));
    }
    if rho >= T::one() {
        return Err(Error::UnstableQueue { layer: None, rho: rho.as_f64() });
    }
    if rho == T::zero() {
        return Ok(T::zero());
    }
    let a = T::of_usize(n_servers) * rho;
    let mut b = T::one();
    for k in 1..=n_servers {
        let ab = a * b;
        b = ab / (T::of_usize(k) + ab);
    }
    let textbook = b / (T::one() - rho * (T::one() - b));
    Ok(match variant {
        ErlangVariant::Textbook => textbook,
        ErlangVariant::AsPrinted => textbook * (T::one() - rho),
    })
}

/// Aggregate view of one layer's server pool.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LayerPool<T> {
    pub servers: usize,
    /// Per-server capacity, cycles per second.
    pub capacity_hz: T,
    /// Arrivals per second.
    pub arrival_rate: T,
    /// Service coefficient; `alpha * capacity_hz` is the per-server service rate.
    pub alpha: T,
}

impl<T: Scalar> LayerPool<T> {
    pub fn utilisation(&self) -> T {
        let mu = T::of_usize(self.servers) * self.alpha * self.capacity_hz;
        if mu > T::zero() {
            self.arrival_rate / mu
        } else if self.arrival_rate > T::zero() {
            T::infinity()
        } else {
            T::zero()
        }
    }
}

/// Mean time spent waiting for a server, `C(N, ρ)·ρ / (λ(1 − ρ))`.
pub fn queueing_delay<T: Scalar>(pool: &LayerPool<T>, variant: ErlangVariant) -> Result<T> {
    let rho = pool.utilisation();
    if rho >= T::one() {
        return Err(Error::UnstableQueue { layer: None, rho: rho.as_f64() });
    }
    if pool.arrival_rate == T::zero() {
        return Ok(T::zero());
    }
    let c = erlang_c(pool.servers, rho, variant)?;
    // ρ/λ = 1/(Nας), which stays finite as λ → 0.
    let total_rate = T::of_usize(pool.servers) * pool.alpha * pool.capacity_hz;
    Ok(c / (total_rate * (T::one() - rho)))
}

/// Queueing delay plus execution time `cycles / capacity`.
pub fn compute_latency<T: Scalar>(pool: &LayerPool<T>, cycles: T, variant: ErlangVariant) -> Result<T> {
    if !(pool.capacity_hz > T::zero()) {
        return Err(Error::DivisionGuard("layer capacity must be positive"));
    }
    Ok(queueing_delay(pool, variant)? + cycles / pool.capacity_hz)
}

/// Dynamic energy of executing `cycles` at `capacity_hz`: `κ·ξ·ς²`.
pub fn compute_energy<T: Scalar>(kappa: T, cycles: T, capacity_hz: T) -> Result<T> {
    if !(kappa >= T::zero()) || !(cycles >= T::zero()) || !(capacity_hz >= T::zero()) {
        return Err(Error::InvalidInput("energy inputs must be non-negative".into()));
    }
    Ok(kappa * cycles * capacity_hz * capacity_hz)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    #[test]
    fn arrival_rates() {
        let r = layer_arrival_rates(&[Layer::User], &[100.0], &[[0.5, 0.3, 0.2]]).unwrap();
        assert_relative_eq!(r[0], 50.0);
        assert_relative_eq!(r[1], 30.0);
        assert_relative_eq!(r[2], 20.0);
        let r = layer_arrival_rates(&[Layer::User, Layer::Edge], &[100.0, 100.0], &[[0.0, 1.0, 0.0]; 2]).unwrap();
        assert_eq!(r, [0.0, 200.0, 0.0]);
        assert!(matches!(layer_arrival_rates(&[Layer::Edge], &[1.0], &[[0.1, 0.9, 0.0]]), Err(Error::InvalidDecision(_))));
    }

    #[test]
    fn erlang_small_cases() {
        assert_relative_eq!(erlang_c(1, 0.5, ErlangVariant::AsPrinted).unwrap(), 0.25, max_relative = 1e-15);
        assert_relative_eq!(erlang_c(2, 0.5, ErlangVariant::AsPrinted).unwrap(), 0.5 / 3.0, max_relative = 1e-14);
        assert_relative_eq!(erlang_c(1, 0.5, ErlangVariant::Textbook).unwrap(), 0.5, max_relative = 1e-15);
        assert_eq!(erlang_c(3, 0.0, ErlangVariant::AsPrinted).unwrap(), 0.0);
        assert!(erlang_c(3, 1e-12, ErlangVariant::AsPrinted).unwrap() < 1e-20);
        assert!(matches!(erlang_c(2, 1.0, ErlangVariant::AsPrinted), Err(Error::UnstableQueue { .. })));
        assert!(erlang_c::<f64>(0, 0.5, ErlangVariant::AsPrinted).is_err());
    }

    #[test]
    fn erlang_large_n_is_finite() {
        let c: f64 = erlang_c(5000, 0.95, ErlangVariant::Textbook).unwrap();
        assert!(c.is_finite() && (0.0..=1.0).contains(&c));
    }

    #[test]
    fn latency_examples() {
        let pool = LayerPool { servers: 1, capacity_hz: 1e9, arrival_rate: 50.0, alpha: 1e-7 };
        assert_relative_eq!(pool.utilisation(), 0.5);
        let l = compute_latency(&pool, 1e9, ErlangVariant::AsPrinted).unwrap();
        assert_relative_eq!(l, 1.005, max_relative = 1e-14);

        let idle = LayerPool { arrival_rate: 0.0, ..pool };
        assert_eq!(compute_latency(&idle, 1e9, ErlangVariant::AsPrinted).unwrap(), 1.0);
        let tiny = LayerPool { arrival_rate: 1e-9, ..pool };
        assert_relative_eq!(compute_latency(&tiny, 1e9, ErlangVariant::AsPrinted).unwrap(), 1.0, max_relative = 1e-12);

        let hot = LayerPool { arrival_rate: 100.0, ..pool };
        assert!(matches!(queueing_delay(&hot, ErlangVariant::AsPrinted), Err(Error::UnstableQueue { .. })));
    }

    #[test]
    fn energy_examples() {
        assert_relative_eq!(compute_energy(1e-29, 1e9, 1e9).unwrap(), 0.01, max_relative = 1e-12);
        assert_eq!(compute_energy(1e-29, 0.0, 1e9).unwrap(), 0.0);
        let e1 = compute_energy(1e-29, 1e9, 1e9).unwrap();
        let e2 = compute_energy(1e-29, 1e9, 2e9).unwrap();
        assert_relative_eq!(e2, 4.0 * e1, max_relative = 1e-14);
    }
}
