use serde::{Deserialize, Serialize};

use crate::{Error, Result, Scalar};

/// Largest lattice the generators will build unless asked otherwise.
pub const DEFAULT_POINT_CAP: usize = 100_000;

/// Unit-simplex reference directions.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReferencePointSet<T> {
    pub points: Vec<Vec<T>>,
}

impl<T> ReferencePointSet<T> {
    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }
}

/// `C(divisions + m − 1, m − 1)`, or `None` on overflow.
pub fn lattice_size(m: usize, divisions: usize) -> Option<u128> {
    let n = (divisions + m - 1) as u128;
    let k = (m - 1).min(divisions) as u128;
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc.checked_mul(n - i)? / (i + 1);
    }
    Some(acc)
}

/// Every point of the simplex lattice with `divisions` steps per axis.
pub fn generate_reference_points<T: Scalar>(m: usize, divisions: usize) -> Result<ReferencePointSet<T>> {
    generate_reference_points_capped(m, divisions, DEFAULT_POINT_CAP)
}

pub fn generate_reference_points_capped<T: Scalar>(m: usize, divisions: usize, cap: usize) -> Result<ReferencePointSet<T>> {
    if m < 2 {
        return Err(Error::InvalidInput(format!("need at least two objectives, got {m}")));
    }
    if divisions < 1 {
        return Err(Error::InvalidInput("need at least one division".into()));
    }
    let count = lattice_size(m, divisions).unwrap_or(u128::MAX);
    if count > cap as u128 {
        return Err(Error::TooManyPoints { count, cap });
    }
    let mut points = Vec::with_capacity(count as usize);
    let mut current = vec![0usize; m];
    fill(&mut points, &mut current, 0, divisions, divisions);
    Ok(ReferencePointSet { points })
}

fn fill<T: Scalar>(out: &mut Vec<Vec<T>>, current: &mut [usize], axis: usize, left: usize, total: usize) {
    let m = current.len();
    if axis == m - 1 {
        current[axis] = left;
        let h = T::of_usize(total);
        out.push(current.iter().map(|&c| T::of_usize(c) / h).collect());
        return;
    }
    for k in (0..=left).rev() {
        current[axis] = k;
        fill(out, current, axis + 1, left - k, total);
    }
}

/// Boundary lattice with `outer` divisions plus an inner lattice with `inner` divisions
/// shrunk halfway towards the simplex centre. `inner = 0` omits the inner layer.
pub fn two_layer_reference_points<T: Scalar>(m: usize, outer: usize, inner: usize) -> Result<ReferencePointSet<T>> {
    let mut set = generate_reference_points(m, outer)?;
    if inner > 0 {
        let half = T::of(0.5);
        let centre = half / T::of_usize(m);
        let inner_set = generate_reference_points::<T>(m, inner)?;
        set.points.extend(inner_set.points.into_iter().map(|p| p.into_iter().map(|v| half * v + centre).collect()));
    }
    Ok(set)
}

/// The densest lattice not exceeding `target` points: a single layer below eight objectives,
/// two layers (`h`, `h − 1`) from eight on.
pub fn auto_reference_points<T: Scalar>(m: usize, target: usize) -> Result<ReferencePointSet<T>> {
    if m < 2 {
        return Err(Error::InvalidInput(format!("need at least two objectives, got {m}")));
    }
    let size = |h: usize| lattice_size(m, h).unwrap_or(u128::MAX);
    if m < 8 {
        let mut h = 1;
        while size(h + 1) <= target as u128 {
            h += 1;
        }
        generate_reference_points(m, h)
    } else {
        let total = |h: usize| size(h).saturating_add(if h > 1 { size(h - 1) } else { 0 });
        let mut h = 1;
        while total(h + 1) <= target as u128 {
            h += 1;
        }
        two_layer_reference_points(m, h, h - 1)
    }
}
