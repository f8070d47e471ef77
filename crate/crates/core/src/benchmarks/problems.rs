use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::moea::{generate_reference_points, Evaluation, Genome, GenomeLayout, Problem};
use crate::{Error, Result, Scalar};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum BenchmarkKind {
    Dtlz1,
    Dtlz2,
    Sdtlz1,
    Sdtlz2,
}

impl BenchmarkKind {
    fn linear(self) -> bool {
        matches!(self, BenchmarkKind::Dtlz1 | BenchmarkKind::Sdtlz1)
    }

    fn scaled(self) -> bool {
        matches!(self, BenchmarkKind::Sdtlz1 | BenchmarkKind::Sdtlz2)
    }

    /// Number of distance variables.
    pub fn k(self) -> usize {
        if self.linear() {
            5
        } else {
            10
        }
    }
}

impl fmt::Display for BenchmarkKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BenchmarkKind::Dtlz1 => "dtlz1",
            BenchmarkKind::Dtlz2 => "dtlz2",
            BenchmarkKind::Sdtlz1 => "sdtlz1",
            BenchmarkKind::Sdtlz2 => "sdtlz2",
        })
    }
}

impl FromStr for BenchmarkKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "dtlz1" => Ok(BenchmarkKind::Dtlz1),
            "dtlz2" => Ok(BenchmarkKind::Dtlz2),
            "sdtlz1" => Ok(BenchmarkKind::Sdtlz1),
            "sdtlz2" => Ok(BenchmarkKind::Sdtlz2),
            _ => Err(Error::UnknownProblem(s.to_string())),
        }
    }
}

/// A DTLZ1/DTLZ2 instance, optionally with objective `i` scaled by `a^i`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct BenchmarkProblem<T> {
    pub kind: BenchmarkKind,
    pub m: usize,
    pub decision_length: usize,
    pub scale_factors: Vec<T>,
}

/// Points on the analytic Pareto front.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FrontSample<T> {
    pub points: Vec<Vec<T>>,
}

/// Scaling base per objective count: 10 up to five objectives, 3 for six to eight, 2 beyond.
fn scale_base(m: usize) -> f64 {
    match m {
        0..=5 => 10.0,
        6..=8 => 3.0,
        _ => 2.0,
    }
}

impl<T: Scalar> BenchmarkProblem<T> {
    pub fn new(kind: BenchmarkKind, m: usize) -> Result<Self> {
        if m < 2 {
            return Err(Error::InvalidInput(format!("need at least two objectives, got {m}")));
        }
        let base = scale_base(m);
        let scale_factors = (0..m).map(|i| if kind.scaled() { T::of(base.powi(i as i32)) } else { T::one() }).collect();
        Ok(Self { kind, m, decision_length: m + kind.k() - 1, scale_factors })
    }

    pub fn with_scale_factors(mut self, factors: Vec<T>) -> Result<Self> {
        if factors.len() != self.m {
            return Err(Error::DimensionMismatch { expected: self.m, found: factors.len() });
        }
        self.scale_factors = factors;
        Ok(self)
    }

    pub fn name(&self) -> String {
        self.kind.to_string()
    }

    pub fn evaluate(&self, x: &[T]) -> Result<Vec<T>> {
        if x.len() != self.decision_length {
            return Err(Error::DimensionMismatch { expected: self.decision_length, found: x.len() });
        }
        if x.iter().any(|v| !(*v >= T::zero() && *v <= T::one())) {
            return Err(Error::InvalidInput("decision variables must lie in [0, 1]".into()));
        }
        let x: Vec<f64> = x.iter().map(|v| v.as_f64()).collect();
        let m = self.m;
        let (pos, dist) = x.split_at(m - 1);
        let mut f = vec![0.0; m];
        if self.kind.linear() {
            let g = 100.0 * (dist.len() as f64 + dist.iter().map(|&v| (v - 0.5).powi(2) - (20.0 * PI * (v - 0.5)).cos()).sum::<f64>());
            for (i, fi) in f.iter_mut().enumerate() {
                let mut v = 0.5 * (1.0 + g);
                v *= pos[..m - 1 - i].iter().product::<f64>();
                if i > 0 {
                    v *= 1.0 - pos[m - 1 - i];
                }
                *fi = v;
            }
        } else {
            let g: f64 = dist.iter().map(|&v| (v - 0.5).powi(2)).sum();
            for (i, fi) in f.iter_mut().enumerate() {
                let mut v = 1.0 + g;
                v *= pos[..m - 1 - i].iter().map(|&p| (p * PI / 2.0).cos()).product::<f64>();
                if i > 0 {
                    v *= (pos[m - 1 - i] * PI / 2.0).sin();
                }
                *fi = v;
            }
        }
        Ok(f.into_iter().zip(&self.scale_factors).map(|(v, &s)| T::of(v) * s).collect())
    }

    /// A simplex lattice mapped onto the front: the densest lattice with at most `count`
    /// points, projected to the plane `Σf = 0.5` (DTLZ1) or the unit sphere (DTLZ2), then scaled.
    pub fn sample_true_front(&self, count: usize) -> Result<FrontSample<T>> {
        if count < self.m {
            return Err(Error::InvalidInput(format!("need at least {} front points, got {count}", self.m)));
        }
        let mut h = 1;
        while crate::moea::reference::lattice_size(self.m, h + 1).is_some_and(|c| c <= count as u128) {
            h += 1;
        }
        let lattice = generate_reference_points::<T>(self.m, h)?;
        let points = lattice
            .points
            .into_iter()
            .map(|w| {
                let mapped: Vec<T> = if self.kind.linear() {
                    w.iter().map(|&v| v * T::of(0.5)).collect()
                } else {
                    let norm = w.iter().map(|&v| v * v).sum::<T>().sqrt();
                    w.iter().map(|&v| v / norm).collect()
                };
                mapped.into_iter().zip(&self.scale_factors).map(|(v, &s)| v * s).collect()
            })
            .collect();
        Ok(FrontSample { points })
    }
}

impl<T: Scalar> Problem<T> for BenchmarkProblem<T> {
    fn objective_count(&self) -> usize {
        self.m
    }

    fn layout(&self) -> GenomeLayout<T> {
        GenomeLayout::unit_box(self.decision_length)
    }

    fn evaluate(&self, genome: &Genome<T>) -> Result<Evaluation<T>> {
        Ok(Evaluation { objectives: BenchmarkProblem::evaluate(self, &genome.reals)?, violation: T::zero() })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn mid(p: &BenchmarkProblem<f64>, pos: &[f64]) -> Vec<f64> {
        let mut x = pos.to_vec();
        x.resize(p.decision_length, 0.5);
        x
    }

    #[test]
    fn dtlz2_on_sphere() {
        let p = BenchmarkProblem::<f64>::new(BenchmarkKind::Dtlz2, 3).unwrap();
        assert_eq!(p.decision_length, 12);
        let f = p.evaluate(&mid(&p, &[0.3, 0.8])).unwrap();
        assert_relative_eq!(f.iter().map(|v| v * v).sum::<f64>(), 1.0, epsilon = 1e-12);
    }

    #[test]
    fn dtlz1_on_plane() {
        let p = BenchmarkProblem::<f64>::new(BenchmarkKind::Dtlz1, 4).unwrap();
        assert_eq!(p.decision_length, 8);
        let f = p.evaluate(&mid(&p, &[0.3, 0.8, 0.1])).unwrap();
        assert_relative_eq!(f.iter().sum::<f64>(), 0.5, epsilon = 1e-12);
    }

    #[test]
    fn sdtlz_scaling() {
        let plain = BenchmarkProblem::<f64>::new(BenchmarkKind::Dtlz2, 3).unwrap();
        let scaled = BenchmarkProblem::<f64>::new(BenchmarkKind::Sdtlz2, 3).unwrap();
        assert_eq!(scaled.scale_factors, vec![1.0, 10.0, 100.0]);
        let x = mid(&plain, &[0.2, 0.6]);
        let (a, b) = (plain.evaluate(&x).unwrap(), scaled.evaluate(&x).unwrap());
        assert_eq!(b[1], 10.0 * a[1]);
        assert_eq!(b[2], 100.0 * a[2]);
    }

    #[test]
    fn rejects_out_of_range() {
        let p = BenchmarkProblem::<f64>::new(BenchmarkKind::Dtlz2, 3).unwrap();
        let mut x = vec![0.5; 12];
        x[0] = 1.5;
        assert!(p.evaluate(&x).is_err());
        assert!(p.evaluate(&[0.5; 3]).is_err());
        assert!(matches!("zdt1".parse::<BenchmarkKind>(), Err(Error::UnknownProblem(_))));
    }

    #[test]
    fn front_sample_two_objectives() {
        let p = BenchmarkProblem::<f64>::new(BenchmarkKind::Dtlz2, 2).unwrap();
        let mut pts = p.sample_true_front(3).unwrap().points;
        pts.sort_by(|a, b| b.partial_cmp(a).unwrap());
        let h = std::f64::consts::FRAC_1_SQRT_2;
        let expected = [[1.0, 0.0], [h, h], [0.0, 1.0]];
        for (p, e) in pts.iter().zip(expected) {
            assert_relative_eq!(p[0], e[0], epsilon = 1e-15);
            assert_relative_eq!(p[1], e[1], epsilon = 1e-15);
        }
    }

    #[test]
    fn front_samples_satisfy_equations() {
        for kind in [BenchmarkKind::Dtlz1, BenchmarkKind::Dtlz2, BenchmarkKind::Sdtlz1, BenchmarkKind::Sdtlz2] {
            let p = BenchmarkProblem::<f64>::new(kind, 4).unwrap();
            for pt in p.sample_true_front(200).unwrap().points {
                let unscaled: Vec<f64> = pt.iter().zip(&p.scale_factors).map(|(v, s)| v / s).collect();
                let lhs = if kind.linear() { unscaled.iter().sum::<f64>() } else { unscaled.iter().map(|v| v * v).sum() };
                let rhs = if kind.linear() { 0.5 } else { 1.0 };
                assert!((lhs - rhs).abs() < 1e-12);
            }
        }
    }
}
