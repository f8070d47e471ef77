/// Quantile by linear interpolation between order statistics (R type 7).
pub fn quantile(values: &[f64], q: f64) -> f64 {
    assert!(!values.is_empty(), "quantile of an empty set");
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let pos = q.clamp(0.0, 1.0) * (v.len() - 1) as f64;
    let lo = pos.floor() as usize;
    let hi = pos.ceil() as usize;
    v[lo] + (v[hi] - v[lo]) * (pos - lo as f64)
}

pub fn median(values: &[f64]) -> f64 {
    quantile(values, 0.5)
}

/// Relative change (after − before)/|before|; a zero baseline uses 1 as the denominator.
pub fn improvement_rate(before: f64, after: f64) -> f64 {
    let base = if before == 0.0 { 1.0 } else { before.abs() };
    (after - before) / base
}
