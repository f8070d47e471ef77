//! NOMA uplink rates and the transmission latency/energy they imply.

use crate::cpn::types::BITS_PER_KB;
use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct UserLink<T> {
    pub tx_power_w: T,
    pub channel_gain: T,
}

/// Shannon rate of each user under successive interference cancellation.
///
/// `users` must be sorted by ascending channel gain; user `u` sees interference from every
/// user after it in the slice.
pub fn noma_rates<T: Scalar>(users: &[UserLink<T>], bandwidth_hz: T, noise_power_w: T) -> Result<Vec<T>> {
    if !(bandwidth_hz > T::zero()) || !(noise_power_w > T::zero()) {
        return Err(Error::InvalidInput("bandwidth and noise power must be positive".into()));
    }
    for (i, u) in users.iter().enumerate() {
        if !(u.tx_power_w > T::zero()) || !(u.channel_gain > T::zero()) {
            return Err(Error::InvalidInput(format!("user {i} has non-positive power or gain")));
        }
        if i > 0 && users[i - 1].channel_gain > u.channel_gain {
            return Err(Error::InvalidInput("users must be sorted by ascending channel gain".into()));
        }
    }
    let mut rates = vec![T::zero(); users.len()];
    let mut interference = T::zero();
    for (i, u) in users.iter().enumerate().rev() {
        let received = u.tx_power_w * u.channel_gain;
        rates[i] = bandwidth_hz * (T::one() + received / (noise_power_w + interference)).log2();
        interference = interference + received;
    }
    Ok(rates)
}

/// Seconds to push `data_kb` kilobytes at `rate_bps`.
pub fn transmission_latency<T: Scalar>(data_kb: T, rate_bps: T) -> Result<T> {
    if !(rate_bps > T::zero()) {
        return Err(Error::DivisionGuard("transmission rate must be positive"));
    }
    if !(data_kb >= T::zero()) {
        return Err(Error::InvalidInput(format!("data size must be non-negative, got {data_kb}")));
    }
    Ok(data_kb * T::of(BITS_PER_KB) / rate_bps)
}

pub fn transmission_energy<T: Scalar>(tx_power_w: T, latency_s: T) -> Result<T> {
    if !(tx_power_w >= T::zero()) || !(latency_s >= T::zero()) {
        return Err(Error::InvalidInput("power and latency must be non-negative".into()));
    }
    Ok(tx_power_w * latency_s)
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn link(p: f64, g: f64) -> UserLink<f64> {
        UserLink { tx_power_w: p, channel_gain: g }
    }

    #[test]
    fn single_user_unit_snr() {
        let r = noma_rates(&[link(1.0, 1.0)], 20e6, 1.0).unwrap();
        assert_relative_eq!(r[0], 20e6, max_relative = 1e-15);
    }

    #[test]
    fn two_users_one_interferer() {
        let r = noma_rates(&[link(1.0, 1.0), link(1.0, 1.0)], 20e6, 1.0).unwrap();
        assert_relative_eq!(r[0], 20e6 * 1.5f64.log2(), max_relative = 1e-15);
        assert_relative_eq!(r[1], 20e6, max_relative = 1e-15);
    }

    #[test]
    fn rejects_bad_links() {
        assert!(noma_rates(&[link(0.0, 1.0)], 1.0, 1.0).is_err());
        assert!(noma_rates(&[link(1.0, -1.0)], 1.0, 1.0).is_err());
        assert!(noma_rates(&[link(1.0, 2.0), link(1.0, 1.0)], 1.0, 1.0).is_err());
    }

    #[test]
    fn latency_and_energy() {
        let l = transmission_latency(2000.0, 20e6).unwrap();
        assert_relative_eq!(l, 0.8192, max_relative = 1e-15);
        assert_relative_eq!(transmission_energy(0.1, l).unwrap(), 0.08192, max_relative = 1e-15);
        assert_eq!(transmission_latency(0.0, 1.0).unwrap(), 0.0);
        assert_eq!(transmission_latency(1.0, 0.0), Err(Error::DivisionGuard("transmission rate must be positive")));
        assert_eq!(transmission_energy(0.5, 0.0).unwrap(), 0.0);
    }

    #[test]
    fn works_in_f32() {
        let r = noma_rates(&[UserLink { tx_power_w: 1.0f32, channel_gain: 1.0 }], 20e6f32, 1.0).unwrap();
        assert!((r[0] - 20e6).abs() / 20e6 < 1e-6);
    }
}
