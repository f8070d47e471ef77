use crate::{Error, Result};

/// A binary dominance relation over the members `0..len()` of some population.
pub trait DominanceRelation {
    fn len(&self) -> usize;
    fn dominates(&self, i: usize, j: usize) -> bool;

    fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

/// Adapts a closure over member indices.
pub struct FnRelation<F> {
    len: usize,
    f: F,
}

impl<F: Fn(usize, usize) -> bool> FnRelation<F> {
    pub fn new(len: usize, f: F) -> Self {
        Self { len, f }
    }
}

impl<F: Fn(usize, usize) -> bool> DominanceRelation for FnRelation<F> {
    fn len(&self) -> usize {
        self.len
    }

    fn dominates(&self, i: usize, j: usize) -> bool {
        (self.f)(i, j)
    }
}

/// Splits the members into fronts: front 0 holds members nobody dominates, front `k` those
/// dominated only by members of earlier fronts.
///
/// Fails if the relation holds in both directions for some pair.
pub fn non_dominated_sort<D: DominanceRelation + ?Sized>(relation: &D) -> Result<Vec<Vec<usize>>> {
    let n = relation.len();
    let mut dominated_count = vec![0usize; n];
    let mut dominates: Vec<Vec<usize>> = vec![Vec::new(); n];
    for i in 0..n {
        for j in (i + 1)..n {
            let ij = relation.dominates(i, j);
            let ji = relation.dominates(j, i);
            match (ij, ji) {
                (true, true) => return Err(Error::AsymmetricComparator(i, j)),
                (true, false) => {
                    dominates[i].push(j);
                    dominated_count[j] += 1;
                }
                (false, true) => {
                    dominates[j].push(i);
                    dominated_count[i] += 1;
                }
                (false, false) => {}
            }
        }
    }

    let mut fronts = Vec::new();
    let mut assigned = vec![false; n];
    let mut remaining = n;
    let mut current: Vec<usize> = (0..n).filter(|&i| dominated_count[i] == 0).collect();
    while remaining > 0 {
        if current.is_empty() {
            // Only reachable through a dominance cycle: release the least-dominated members.
            let min = (0..n).filter(|&i| !assigned[i]).map(|i| dominated_count[i]).min().expect("members remain");
            current = (0..n).filter(|&i| !assigned[i] && dominated_count[i] == min).collect();
        }
        let mut next = Vec::new();
        for &i in &current {
            assigned[i] = true;
        }
        for &i in &current {
            for &j in &dominates[i] {
                if !assigned[j] {
                    dominated_count[j] -= 1;
                    if dominated_count[j] == 0 {
                        next.push(j);
                    }
                }
            }
        }
        remaining -= current.len();
        current.sort_unstable();
        fronts.push(std::mem::take(&mut current));
        next.sort_unstable();
        next.dedup();
        current = next.into_iter().filter(|&j| !assigned[j]).collect();
    }
    Ok(fronts)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mutually_non_dominated() {
        let r = FnRelation::new(4, |_, _| false);
        assert_eq!(non_dominated_sort(&r).unwrap(), vec![vec![0, 1, 2, 3]]);
    }

    #[test]
    fn strict_chain() {
        // 2 ≺ 0 ≺ 1
        let rank = [1, 2, 0];
        let r = FnRelation::new(3, |i, j| rank[i] < rank[j]);
        assert_eq!(non_dominated_sort(&r).unwrap(), vec![vec![2], vec![0], vec![1]]);
    }

    #[test]
    fn asymmetry_violation() {
        let r = FnRelation::new(3, |i, j| i != j && (i + j) == 3);
        assert_eq!(non_dominated_sort(&r), Err(Error::AsymmetricComparator(1, 2)));
    }

    #[test]
    fn cycle_does_not_hang() {
        let r = FnRelation::new(3, |i, j| (i + 1) % 3 == j);
        let fronts = non_dominated_sort(&r).unwrap();
        assert_eq!(fronts.iter().map(Vec::len).sum::<usize>(), 3);
    }

    #[test]
    fn empty() {
        let r = FnRelation::new(0, |_, _| false);
        assert!(non_dominated_sort(&r).unwrap().is_empty());
    }
}
