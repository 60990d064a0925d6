//! Iterated tangent lifts: level `j` is `Φ` applied `j` times, and the Lee form
//! of level `j` is computed on the phase structure built from level `j − 1`.

use crate::classify::{classify_structure, ClassificationReport};
use crate::connection::AffineRiemann;
use crate::error::{Error, Result};
use crate::hermitian::lee_form_with;
use crate::linalg;
use crate::phase::phase;
use crate::scalar::Scalar;

/// Largest admissible lifted dimension `n·2^k` unless raised by the caller.
pub const DEFAULT_DIM_CAP: usize = 64;

#[derive(Clone, Debug)]
pub struct LiftLevel<S> {
    pub level: usize,
    /// The affine-Riemann structure of level `level`.
    pub structure: AffineRiemann<S>,
    /// Lee form of the Hermitian structure of level `level`, computed directly.
    pub theta: Vec<S>,
    /// Reduced classification of this level's Hermitian structure, read off
    /// the previous level.
    pub report: ClassificationReport,
}

impl<S: Scalar> LiftLevel<S> {
    pub fn dim(&self) -> usize {
        self.structure.dim()
    }

    pub fn is_balanced(&self) -> bool {
        linalg::is_zero_vec(&self.theta, self.structure.tol())
    }

    /// Names the first recursion identity that fails against the base structure:
    /// `α_j = 2^j α∘π`, `θ_j = ((2^j − 1)α − ξ)∘π`, `ξ_j = −θ_j`.
    pub fn recursion_defect(&self, base: &AffineRiemann<S>) -> Option<&'static str> {
        let tol = self.structure.tol();
        let dt = self.structure.difference();
        let scale = S::from_i64(1i64 << self.level);
        let alpha = pad(&linalg::vscale(base.difference().alpha(), &scale), self.dim());
        let theta = pad(&linalg::vsub(&linalg::vscale(base.difference().alpha(), &(scale - &S::one())), base.difference().xi()), self.dim());
        if !linalg::is_zero_vec(&linalg::vsub(dt.alpha(), &alpha), tol) {
            return Some("alpha");
        }
        if !linalg::is_zero_vec(&linalg::vsub(&self.theta, &theta), tol) {
            return Some("theta");
        }
        if !linalg::is_zero_vec(&linalg::vadd(dt.xi(), &self.theta), tol) {
            return Some("xi");
        }
        None
    }
}

/// Pulls a base covector back along the iterated horizontal projection, which
/// in the phase basis is padding with zeros.
fn pad<S: Scalar>(eta: &[S], dim: usize) -> Vec<S> {
    let mut out = eta.to_vec();
    out.resize(dim, S::zero());
    out
}

/// Levels `1..=k` above `base`; fails with `ResourceCap` when `n·2^k > cap`.
pub fn iterate_lift<S: Scalar>(base: &AffineRiemann<S>, k: usize, cap: usize) -> Result<Vec<LiftLevel<S>>> {
    let top = base.dim().checked_shl(k as u32).unwrap_or(usize::MAX);
    if k >= usize::BITS as usize || top > cap {
        return Err(Error::ResourceCap { dim: top, cap });
    }
    let mut levels: Vec<LiftLevel<S>> = Vec::with_capacity(k);
    for level in 1..=k {
        let prev = levels.last().map_or(base, |l| &l.structure);
        let ps = phase(prev.algebra(), prev.metric())?;
        let structure = AffineRiemann::new(ps.algebra().clone(), ps.metric().clone())?;
        let theta = lee_form_with(&ps, structure.levi_civita());
        let report = classify_structure(prev, 1);
        levels.push(LiftLevel { level, structure, theta, report });
    }
    Ok(levels)
}
