mod oracles;

use cpnshare_core::benchmarks::*;
use cpnshare_core::topsis::*;
use proptest::prelude::*;

fn points(m: usize, max: usize) -> impl Strategy<Value = Vec<Vec<f64>>> {
    proptest::collection::vec(proptest::collection::vec(0.0f64..1.0, m), 1..max)
}

proptest! {
    #[test]
    fn igd_translation_invariant(front in points(3, 12), refs in points(3, 12), shift in proptest::collection::vec(-5.0f64..5.0, 3)) {
        let base = igd(&front, &FrontSample { points: refs.clone() }).unwrap();
        let mv = |p: &Vec<Vec<f64>>| p.iter().map(|v| v.iter().zip(&shift).map(|(a, s)| a + s).collect()).collect::<Vec<Vec<f64>>>();
        let moved = igd(&mv(&front), &FrontSample { points: mv(&refs) }).unwrap();
        prop_assert!((base - moved).abs() < 1e-9);
    }

    #[test]
    fn igd_never_grows_when_front_refined(front in points(2, 8), extra in points(2, 4), refs in points(2, 8)) {
        let r = FrontSample { points: refs };
        let mut bigger = front.clone();
        bigger.extend(extra);
        prop_assert!(igd(&bigger, &r).unwrap() <= igd(&front, &r).unwrap());
    }

    #[test]
    fn pd_permutation_invariant(pts in points(3, 10), rot in 0usize..10) {
        let mut other = pts.clone();
        let k = rot % other.len();
        other.rotate_left(k);
        other.reverse();
        let (a, b) = (pd(&pts), pd(&other));
        prop_assert!((a - b).abs() <= 1e-9 * a.abs().max(1.0));
    }

    #[test]
    fn pd_matches_recursion_on_three_points(pts in proptest::collection::vec(proptest::collection::vec(0.0f64..1.0, 2), 3)) {
        let (a, b) = (pd(&pts), oracles::pd_recursive(&pts));
        prop_assert!((a - b).abs() <= 1e-9 * b.max(1.0), "{} vs {}", a, b);
    }

    #[test]
    fn dominator_ranks_first(
        rows in proptest::collection::vec(proptest::collection::vec(1.0f64..10.0, 4), 2..8),
        benefit in proptest::collection::vec(any::<bool>(), 4),
    ) {
        let mut rows = rows;
        let dom: Vec<f64> = (0..4)
            .map(|c| {
                let col = rows.iter().map(|r| r[c]);
                if benefit[c] { col.fold(f64::MIN, f64::max) + 1.0 } else { col.fold(f64::MAX, f64::min) - 0.5 }
            })
            .collect();
        rows.push(dom);
        let m = DecisionMatrix::new(rows.clone(), benefit).unwrap();
        let (w, rank) = select(&m).unwrap();
        prop_assert!((w.weights.iter().sum::<f64>() - 1.0).abs() < 1e-9);
        prop_assert_eq!(rank.best(), rows.len() - 1);
    }

    #[test]
    fn ranking_invariant_under_column_scaling(
        rows in proptest::collection::vec(proptest::collection::vec(1.0f64..10.0, 3), 3..7),
        factor in 0.01f64..100.0,
        col in 0usize..3,
    ) {
        let weights = [0.5, 0.3, 0.2];
        let benefit = vec![true, false, true];
        let scaled: Vec<Vec<f64>> = rows.iter().map(|r| { let mut r = r.clone(); r[col] *= factor; r }).collect();
        let a = topsis_rank(&DecisionMatrix::new(rows, benefit.clone()).unwrap(), &weights).unwrap();
        let b = topsis_rank(&DecisionMatrix::new(scaled, benefit).unwrap(), &weights).unwrap();
        for (x, y) in a.closeness.iter().zip(&b.closeness) {
            prop_assert!((x - y).abs() < 1e-9);
        }
    }
}

#[test]
fn topsis_hand_oracle() {
    // Benefit column (3, 4, 0), cost column (4, 3, 0), equal weights.
    // Normalized: (0.6, 0.8, 0) and (0.8, 0.6, 0); weighted: halves.
    // Ideal (0.4, 0), anti-ideal (0, 0.4).
    // Row 0 (0.3, 0.4): D+ = √(0.01+0.16), D- = √(0.09+0).
    // Row 1 (0.4, 0.3): D+ = 0.3, D- = √(0.16+0.01).
    // Row 2 (0, 0):     D+ = 0.4, D- = 0.4.
    let m = DecisionMatrix::new(vec![vec![3.0, 4.0], vec![4.0, 3.0], vec![0.0, 0.0]], vec![true, false]).unwrap();
    let r = topsis_rank(&m, &[0.5, 0.5]).unwrap();
    let c0 = 0.3 / (0.17f64.sqrt() + 0.3);
    let c1 = 0.17f64.sqrt() / (0.3 + 0.17f64.sqrt());
    assert!((r.closeness[0] - c0).abs() < 1e-12);
    assert!((r.closeness[1] - c1).abs() < 1e-12);
    assert!((r.closeness[2] - 0.5).abs() < 1e-12);
    assert_eq!(r.order, vec![1, 2, 0]);
}

#[test]
fn igd_hand_values() {
    let r = FrontSample { points: vec![vec![0.0, 0.0]] };
    assert_eq!(igd(&[vec![3.0, 4.0]], &r).unwrap(), 5.0);
    assert!(igd::<f64>(&[], &r).is_err());
}

#[test]
fn true_front_samples_lie_on_front() {
    for kind in [BenchmarkKind::Dtlz1, BenchmarkKind::Dtlz2] {
        let p = BenchmarkProblem::<f64>::new(kind, 4).unwrap();
        let s = p.sample_true_front(60).unwrap();
        for pt in &s.points {
            let v = match kind {
                BenchmarkKind::Dtlz1 => pt.iter().sum::<f64>() - 0.5,
                _ => pt.iter().map(|x| x * x).sum::<f64>() - 1.0,
            };
            assert!(v.abs() < 1e-12);
        }
    }
}
