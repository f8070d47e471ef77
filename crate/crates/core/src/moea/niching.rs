//! Reference-point association and niche preservation for filling the last admitted front.

use crate::Scalar;

/// Normalises the members of `pool` against their ideal point and the hyperplane through the
/// extreme points (falling back to the nadir when the hyperplane is degenerate).
pub fn normalize_pool<T: Scalar>(objectives: &[Vec<T>], pool: &[usize], keys: &[u64]) -> Vec<Vec<T>> {
    let m = objectives[pool[0]].len();
    let mut ideal = vec![T::infinity(); m];
    for &i in pool {
        for k in 0..m {
            ideal[k] = ideal[k].min(objectives[i][k]);
        }
    }
    let translated: Vec<Vec<T>> = pool.iter().map(|&i| (0..m).map(|k| objectives[i][k] - ideal[k]).collect()).collect();

    let small = T::of(1e-6);
    let mut extremes = Vec::with_capacity(m);
    for axis in 0..m {
        let asf = |v: &[T]| (0..m).map(|k| v[k] / if k == axis { T::one() } else { small }).fold(T::neg_infinity(), T::max);
        let best = (0..pool.len())
            .min_by(|&a, &b| {
                asf(&translated[a]).partial_cmp(&asf(&translated[b])).expect("finite objectives").then(keys[pool[a]].cmp(&keys[pool[b]]))
            })
            .expect("non-empty pool");
        extremes.push(translated[best].clone());
    }

    let eps = T::of(1e-10);
    let intercepts = hyperplane_intercepts(&extremes).filter(|a| a.iter().all(|&v| v.is_finite() && v > eps)).unwrap_or_else(|| {
        (0..m)
            .map(|k| {
                let worst = translated.iter().map(|v| v[k]).fold(T::zero(), T::max);
                if worst > eps {
                    worst
                } else {
                    T::one()
                }
            })
            .collect()
    });
    translated.into_iter().map(|v| v.into_iter().zip(&intercepts).map(|(x, &a)| x / a).collect()).collect()
}

/// Intercepts of the hyperplane through the rows of `extremes` with each axis.
fn hyperplane_intercepts<T: Scalar>(extremes: &[Vec<T>]) -> Option<Vec<T>> {
    let m = extremes.len();
    let mut a: Vec<Vec<T>> = extremes.iter().map(|r| r.iter().copied().chain(std::iter::once(T::one())).collect()).collect();
    for col in 0..m {
        let pivot = (col..m).max_by(|&i, &j| a[i][col].abs().partial_cmp(&a[j][col].abs()).expect("finite"))?;
        if a[pivot][col].abs() < T::of(1e-12) {
            return None;
        }
        a.swap(col, pivot);
        let pivot_row = a[col].clone();
        for (row, r) in a.iter_mut().enumerate() {
            if row != col {
                let f = r[col] / pivot_row[col];
                for (x, &v) in r[col..].iter_mut().zip(&pivot_row[col..]) {
                    *x = *x - f * v;
                }
            }
        }
    }
    // a[i][m] / a[i][i] solves E·w = 1; the intercepts are 1 / w.
    Some((0..m).map(|i| a[i][i] / a[i][m]).collect())
}

/// Index of the nearest reference line and the perpendicular distance to it.
pub fn associate<T: Scalar>(point: &[T], references: &[Vec<T>]) -> (usize, T) {
    let mut best = (0, T::infinity());
    for (r, w) in references.iter().enumerate() {
        let ww: T = w.iter().map(|&v| v * v).sum();
        let pw: T = point.iter().zip(w).map(|(&p, &v)| p * v).sum();
        let scale = if ww > T::zero() { pw / ww } else { T::zero() };
        let d: T = point.iter().zip(w).map(|(&p, &v)| (p - scale * v) * (p - scale * v)).sum::<T>().sqrt();
        if d < best.1 {
            best = (r, d);
        }
    }
    best
}

/// Picks `slots` members of `last_front` to join the already `selected` members.
///
/// `member_keys` (indexed like `objectives`) and `reference_keys` break ties, so the result
/// does not depend on member order once the keys travel with the members.
pub fn associate_and_niche<T: Scalar>(
    objectives: &[Vec<T>],
    selected: &[usize],
    last_front: &[usize],
    references: &[Vec<T>],
    slots: usize,
    member_keys: &[u64],
    reference_keys: &[u64],
) -> Vec<usize> {
    if slots >= last_front.len() {
        return last_front.to_vec();
    }
    if slots == 0 {
        return Vec::new();
    }
    let pool: Vec<usize> = selected.iter().chain(last_front).copied().collect();
    let normalized = normalize_pool(objectives, &pool, member_keys);
    let links: Vec<(usize, T)> = normalized.iter().map(|p| associate(p, references)).collect();

    let mut niche = vec![0usize; references.len()];
    for (pos, _) in selected.iter().enumerate() {
        niche[links[pos].0] += 1;
    }
    let offset = selected.len();
    let mut candidates: Vec<Vec<usize>> = vec![Vec::new(); references.len()];
    for (k, _) in last_front.iter().enumerate() {
        candidates[links[offset + k].0].push(offset + k);
    }

    let mut chosen = Vec::with_capacity(slots);
    while chosen.len() < slots {
        let r = (0..references.len())
            .filter(|&r| !candidates[r].is_empty())
            .min_by_key(|&r| (niche[r], reference_keys[r]))
            .expect("unselected members remain");
        let pick = if niche[r] == 0 {
            candidates[r]
                .iter()
                .enumerate()
                .min_by(|(_, &a), (_, &b)| links[a].1.partial_cmp(&links[b].1).expect("finite").then(member_keys[pool[a]].cmp(&member_keys[pool[b]])))
                .map(|(slot, _)| slot)
        } else {
            candidates[r].iter().enumerate().min_by_key(|(_, &a)| member_keys[pool[a]]).map(|(slot, _)| slot)
        }
        .expect("candidate exists");
        let member = candidates[r].swap_remove(pick);
        chosen.push(pool[member]);
        niche[r] += 1;
    }
    chosen
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn whole_front_when_slots_suffice() {
        let objs = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        let refs = vec![vec![0.5, 0.5]];
        assert_eq!(associate_and_niche(&objs, &[], &[0, 1], &refs, 2, &[0, 1], &[0]), vec![0, 1]);
    }

    #[test]
    fn single_reference_picks_closest_line() {
        // Normalised by the pool extremes, (0.45, 0.55) sits nearest the diagonal.
        let objs = vec![vec![0.0, 1.0], vec![1.0, 0.0], vec![0.45, 0.55]];
        let refs = vec![vec![0.5, 0.5]];
        assert_eq!(associate_and_niche(&objs, &[], &[0, 1, 2], &refs, 1, &[5, 6, 7], &[0]), vec![2]);
    }

    #[test]
    fn association_geometry() {
        let refs = vec![vec![1.0, 0.0], vec![0.0, 1.0], vec![0.5, 0.5]];
        let (r, d): (usize, f64) = associate(&[0.9, 0.1], &refs);
        assert_eq!(r, 0);
        assert!((d - 0.1).abs() < 1e-12);
        assert_eq!(associate(&[0.4, 0.45], &refs).0, 2);
    }

    #[test]
    fn intercepts_of_unit_simplex() {
        let e: Vec<Vec<f64>> = vec![vec![2.0, 0.0, 0.0], vec![0.0, 3.0, 0.0], vec![0.0, 0.0, 4.0]];
        let a: Vec<f64> = hyperplane_intercepts(&e).unwrap();
        for (x, y) in a.iter().zip([2.0, 3.0, 4.0]) {
            assert!((x - y).abs() < 1e-12);
        }
        assert!(hyperplane_intercepts(&[vec![1.0, 1.0], vec![1.0, 1.0]]).is_none());
    }
}
