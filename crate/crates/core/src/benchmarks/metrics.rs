use crate::benchmarks::problems::FrontSample;
use crate::{Error, Result, Scalar};

fn euclid<T: Scalar>(a: &[T], b: &[T]) -> T {
    a.iter().zip(b).map(|(&x, &y)| (x - y) * (x - y)).sum::<T>().sqrt()
}

/// Mean distance from each reference point to its nearest member of `front`.
pub fn igd<T: Scalar>(front: &[Vec<T>], reference: &FrontSample<T>) -> Result<T> {
    if front.is_empty() {
        return Err(Error::EmptySet("front"));
    }
    if reference.points.is_empty() {
        return Err(Error::EmptySet("reference front"));
    }
    let total: T = reference.points.iter().map(|r| front.iter().map(|f| euclid(f, r)).fold(T::infinity(), T::min)).sum();
    Ok(total / T::of_usize(reference.points.len()))
}

/// `(Σ|a_i − b_i|^0.1)^10`.
pub fn quasi_norm_dissimilarity<T: Scalar>(a: &[T], b: &[T]) -> T {
    let p = T::of(0.1);
    a.iter().zip(b).map(|(&x, &y)| (x - y).abs().powf(p)).sum::<T>().powf(T::one() / p)
}

/// Pure diversity: the pair with the largest dissimilarity seeds the set, then the point
/// farthest (in minimum dissimilarity) from the set joins next, and each joining point adds
/// that minimum to the score.
pub fn pd<T: Scalar>(front: &[Vec<T>]) -> T {
    let n = front.len();
    if n < 2 {
        return T::zero();
    }
    let mut best = (0, 1, T::neg_infinity());
    for i in 0..n {
        for j in (i + 1)..n {
            let d = quasi_norm_dissimilarity(&front[i], &front[j]);
            if d > best.2 {
                best = (i, j, d);
            }
        }
    }
    let (a, b, seed) = best;
    let mut total = seed;
    let mut in_set = vec![false; n];
    in_set[a] = true;
    in_set[b] = true;
    let mut nearest: Vec<T> =
        (0..n).map(|k| quasi_norm_dissimilarity(&front[k], &front[a]).min(quasi_norm_dissimilarity(&front[k], &front[b]))).collect();
    for _ in 2..n {
        let next = (0..n)
            .filter(|&k| !in_set[k])
            .fold(None, |acc: Option<usize>, k| match acc {
                Some(c) if nearest[c] >= nearest[k] => Some(c),
                _ => Some(k),
            })
            .expect("points remain");
        total = total + nearest[next];
        in_set[next] = true;
        for k in 0..n {
            if !in_set[k] {
                nearest[k] = nearest[k].min(quasi_norm_dissimilarity(&front[k], &front[next]));
            }
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn igd_examples() {
        let r = FrontSample { points: vec![vec![0.0, 0.0]] };
        assert_eq!(igd(&[vec![3.0, 4.0]], &r).unwrap(), 5.0);
        let r = FrontSample { points: vec![vec![0.0, 1.0], vec![1.0, 0.0]] };
        assert_eq!(igd(&[vec![0.0, 1.0], vec![1.0, 0.0], vec![0.5, 0.5]], &r).unwrap(), 0.0);
        assert!(igd::<f64>(&[], &r).is_err());
        assert!(igd(&[vec![1.0]], &FrontSample { points: vec![] }).is_err());
    }

    #[test]
    fn pd_examples() {
        assert_eq!(pd::<f64>(&[]), 0.0);
        assert_eq!(pd(&[vec![0.2, 0.3]]), 0.0);
        let a = vec![vec![0.0, 1.0], vec![1.0, 0.0]];
        let mut b = a.clone();
        b.push(vec![1.0, 0.0]);
        assert_eq!(pd(&a), pd(&b));
        // One coordinate apart: (|Δ|^0.1)^10 = |Δ|.
        assert!((quasi_norm_dissimilarity(&[0.0, 0.0], &[0.5, 0.0]) - 0.5f64).abs() < 1e-12);
    }
}
