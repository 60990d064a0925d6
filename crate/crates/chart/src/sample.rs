//! Deterministic interior sample points from a Halton sequence.

use crate::error::{ChartError, Result};
use crate::metric::{default_fd_step, BoxDomain};

const PRIMES: [u64; 16] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53];

#[derive(Clone, Debug, PartialEq)]
pub struct SamplePlan {
    pub points: Vec<Vec<f64>>,
    /// Residual threshold; `None` means the default for the derivative source.
    pub tolerance: Option<f64>,
}

/// Radical inverse of `i` in base `b`.
fn radical_inverse(mut i: u64, b: u64) -> f64 {
    let inv = 1.0 / b as f64;
    let mut f = inv;
    let mut acc = 0.0;
    while i > 0 {
        acc += (i % b) as f64 * f;
        i /= b;
        f *= inv;
    }
    acc
}

impl SamplePlan {
    /// `count` Halton points, starting at an index derived from `seed`, mapped
    /// into the box shrunk by `max(2·fd_step, 1% of the side)` on every face.
    pub fn halton(domain: &BoxDomain, count: usize, seed: u64) -> Result<Self> {
        let n = domain.dim();
        assert!(n <= PRIMES.len(), "Halton plan supports at most {} dimensions", PRIMES.len());
        let step_margin = 2.0 * default_fd_step(domain.scale());
        let start = 1 + seed % (1 << 20);
        let mut lo = Vec::with_capacity(n);
        let mut width = Vec::with_capacity(n);
        for k in 0..n {
            let side = domain.hi[k] - domain.lo[k];
            let margin = step_margin.max(0.01 * side);
            if side <= 2.0 * margin {
                return Err(ChartError::EmptyPlan { margin });
            }
            lo.push(domain.lo[k] + margin);
            width.push(side - 2.0 * margin);
        }
        let points = (0..count as u64)
            .map(|i| (0..n).map(|k| lo[k] + width[k] * radical_inverse(start + i, PRIMES[k])).collect())
            .collect();
        Ok(SamplePlan { points, tolerance: None })
    }

    pub fn at(points: Vec<Vec<f64>>) -> Self {
        SamplePlan { points, tolerance: None }
    }

    pub fn with_tolerance(mut self, tol: f64) -> Self {
        self.tolerance = Some(tol);
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn radical_inverse_base_two() {
        assert_eq!(radical_inverse(1, 2), 0.5);
        assert_eq!(radical_inverse(2, 2), 0.25);
        assert_eq!(radical_inverse(3, 2), 0.75);
        assert!((radical_inverse(1, 3) - 1.0 / 3.0).abs() < 1e-15);
    }

    #[test]
    fn points_stay_inside_with_margin_and_are_seeded() {
        let dom = BoxDomain::cube(3, -1.0, 2.0);
        let plan = SamplePlan::halton(&dom, 64, 7).unwrap();
        let margin = 2.0 * default_fd_step(2.0);
        assert_eq!(plan.points.len(), 64);
        for p in &plan.points {
            assert!(p.iter().all(|&v| v >= -1.0 + margin && v <= 2.0 - margin));
        }
        assert_eq!(plan, SamplePlan::halton(&dom, 64, 7).unwrap());
        assert_ne!(plan, SamplePlan::halton(&dom, 64, 8).unwrap());
    }

    #[test]
    fn degenerate_box_is_rejected() {
        let dom = BoxDomain::new(vec![0.0], vec![1e-6]).unwrap();
        assert!(SamplePlan::halton(&dom, 4, 0).is_err());
    }
}
