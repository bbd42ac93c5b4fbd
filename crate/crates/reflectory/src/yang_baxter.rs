//! The pairwise refactorization solver on projectors and the parametric
//! Yang-Baxter maps built from it.
//!
//! Given factors `g_{α₁,P₁} g_{α₂,P₂}` with disjoint supports, the unique
//! refactorization `g_{α₂,P̃₂} g_{α₁,P̃₁}` is obtained by conjugating both
//! projectors with
//!
//! ```text
//! φ = (α₂ − ᾱ₁) I + (ᾱ₂ − α₂) P₂ + (ᾱ₁ − α₁) P₁ .
//! ```
//!
//! `R(α₁,α₂)(P₁,P₂) = (P̃₁,P̃₂)` is the Yang-Baxter map; `R₂₁` solves the
//! reverse factor order. Every result carries a sampled residual of the
//! defining identity.

use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::{ComplexMatrix, HermitianProjector, repair_projector};
use crate::simple::{eval_simple, sample_points_avoiding, set_distance, SimpleElement, SpectralParameter};
use crate::tol;

/// Outcome of a pairwise refactorization.
#[derive(Debug, Clone)]
pub struct YBPairResult {
    pub p1_tilde: HermitianProjector,
    pub p2_tilde: HermitianProjector,
    pub phi: ComplexMatrix,
    /// Max Frobenius mismatch of the two factorizations over the sample
    /// points.
    pub residual: f64,
    /// Reciprocal condition estimate of `φ`; small values flag a near
    /// collision of the supports.
    pub phi_rcond: f64,
}

fn require_disjoint(a1: &SpectralParameter, a2: &SpectralParameter) -> Result<()> {
    let sa = a1.support();
    let sb = a2.support();
    if set_distance(&sa, &sb) <= tol::EPS_SEP {
        // report the closest pair
        let mut best = (sa[0], sb[0], f64::INFINITY);
        for x in &sa {
            for y in &sb {
                let d = (x - y).norm();
                if d < best.2 {
                    best = (*x, *y, d);
                }
            }
        }
        return Err(Error::SupportCollision { a: best.0, b: best.1 });
    }
    Ok(())
}

/// Residual of `l1·l2 = r1·r2` sampled away from all four poles.
fn pair_residual(l1: &SimpleElement, l2: &SimpleElement, r1: &SimpleElement, r2: &SimpleElement) -> Result<f64> {
    let mut poles = Vec::with_capacity(4);
    for g in [l1, l2, r1, r2] {
        poles.push(g.alpha().conj());
    }
    let mut worst = 0.0f64;
    for z in sample_points_avoiding(&poles, tol::SAMPLE_COUNT) {
        let lhs = eval_simple(l1, z)?.matmul(&eval_simple(l2, z)?);
        let rhs = eval_simple(r1, z)?.matmul(&eval_simple(r2, z)?);
        worst = worst.max(lhs.sub(&rhs).frobenius_norm());
    }
    Ok(worst)
}

fn conjugate_pair(
    phi: &ComplexMatrix,
    p1: &HermitianProjector,
    p2: &HermitianProjector,
) -> Result<(HermitianProjector, HermitianProjector, f64)> {
    let (phi_inv, rcond) = linalg::invert(phi)?;
    let c1 = phi.matmul(p1.matrix()).matmul(&phi_inv);
    let c2 = phi.matmul(p2.matrix()).matmul(&phi_inv);
    let q1 = repair_projector(&c1, Some(p1.rank()))?;
    let q2 = repair_projector(&c2, Some(p2.rank()))?;
    Ok((q1, q2, rcond))
}

/// Solve `g_{α₁,P₁} g_{α₂,P₂} = g_{α₂,P̃₂} g_{α₁,P̃₁}`.
pub fn yb_map(
    alpha1: SpectralParameter,
    p1: &HermitianProjector,
    alpha2: SpectralParameter,
    p2: &HermitianProjector,
) -> Result<YBPairResult> {
    assert_eq!(p1.dim(), p2.dim(), "projector dimensions must agree");
    require_disjoint(&alpha1, &alpha2)?;
    let n = p1.dim();
    let a1 = alpha1.value();
    let a2 = alpha2.value();
    let phi = ComplexMatrix::identity(n)
        .scale(a2 - a1.conj())
        .add(&p2.matrix().scale(a2.conj() - a2))
        .add(&p1.matrix().scale(a1.conj() - a1));
    let (p1_tilde, p2_tilde, phi_rcond) = conjugate_pair(&phi, p1, p2)?;
    let residual = pair_residual(
        &SimpleElement::new(alpha1, p1.clone()),
        &SimpleElement::new(alpha2, p2.clone()),
        &SimpleElement::new(alpha2, p2_tilde.clone()),
        &SimpleElement::new(alpha1, p1_tilde.clone()),
    )?;
    Ok(YBPairResult { p1_tilde, p2_tilde, phi, residual, phi_rcond })
}

/// Solve the reverse order `g_{α₂,P₂} g_{α₁,P₁} = g_{α₁,P̃₁} g_{α₂,P̃₂}`,
/// i.e. `R₂₁(α₂,α₁)(P₁,P₂) = (P̃₁,P̃₂)`. Inverse to `R(α₁,α₂)`.
pub fn r21_map(
    alpha2: SpectralParameter,
    alpha1: SpectralParameter,
    p1: &HermitianProjector,
    p2: &HermitianProjector,
) -> Result<YBPairResult> {
    assert_eq!(p1.dim(), p2.dim(), "projector dimensions must agree");
    require_disjoint(&alpha1, &alpha2)?;
    let n = p1.dim();
    let a1 = alpha1.value();
    let a2 = alpha2.value();
    let phi = ComplexMatrix::identity(n)
        .scale(a1 - a2.conj())
        .add(&p1.matrix().scale(a1.conj() - a1))
        .add(&p2.matrix().scale(a2.conj() - a2));
    let (p1_tilde, p2_tilde, phi_rcond) = conjugate_pair(&phi, p1, p2)?;
    let residual = pair_residual(
        &SimpleElement::new(alpha2, p2.clone()),
        &SimpleElement::new(alpha1, p1.clone()),
        &SimpleElement::new(alpha1, p1_tilde.clone()),
        &SimpleElement::new(alpha2, p2_tilde.clone()),
    )?;
    Ok(YBPairResult { p1_tilde, p2_tilde, phi, residual, phi_rcond })
}

/// Apply `R` on slots `(i, j)` of a projector tuple, in place.
pub fn apply_r_slots(
    params: &[SpectralParameter],
    state: &mut [HermitianProjector],
    i: usize,
    j: usize,
) -> Result<f64> {
    let out = yb_map(params[i], &state[i], params[j], &state[j])?;
    state[i] = out.p1_tilde;
    state[j] = out.p2_tilde;
    Ok(out.residual)
}

/// Max discrepancy between `R₁₂R₁₃R₂₃` and `R₂₃R₁₃R₁₂` on a projector
/// triple; the parametric Yang-Baxter residual.
pub fn check_ybe(
    alpha1: SpectralParameter,
    alpha2: SpectralParameter,
    alpha3: SpectralParameter,
    p1: &HermitianProjector,
    p2: &HermitianProjector,
    p3: &HermitianProjector,
) -> Result<f64> {
    require_disjoint(&alpha1, &alpha2)?;
    require_disjoint(&alpha1, &alpha3)?;
    require_disjoint(&alpha2, &alpha3)?;
    let params = [alpha1, alpha2, alpha3];

    // Maps compose right to left.
    let mut lhs = [p1.clone(), p2.clone(), p3.clone()];
    apply_r_slots(&params, &mut lhs, 1, 2)?;
    apply_r_slots(&params, &mut lhs, 0, 2)?;
    apply_r_slots(&params, &mut lhs, 0, 1)?;

    let mut rhs = [p1.clone(), p2.clone(), p3.clone()];
    apply_r_slots(&params, &mut rhs, 0, 1)?;
    apply_r_slots(&params, &mut rhs, 0, 2)?;
    apply_r_slots(&params, &mut rhs, 1, 2)?;

    let mut worst = 0.0f64;
    for k in 0..3 {
        worst = worst.max(lhs[k].distance(&rhs[k]));
    }
    Ok(worst)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{random_projector, C64, HermitianProjector, ONE};
    use crate::rng;

    fn param(re: f64, im: f64) -> SpectralParameter {
        SpectralParameter::new(C64::new(re, im)).unwrap()
    }

    #[test]
    fn equal_projectors_are_fixed() {
        let p = random_projector(3, 2, 2).unwrap();
        let out = yb_map(param(1.0, 1.0), &p, param(2.0, 1.0), &p).unwrap();
        assert!(out.p1_tilde.distance(&p) < 1e-12);
        assert!(out.p2_tilde.distance(&p) < 1e-12);
        assert!(out.residual < tol::TOL_REFAC);
        let back = r21_map(param(2.0, 1.0), param(1.0, 1.0), &p, &p).unwrap();
        assert!(back.p1_tilde.distance(&p) < 1e-12);
        assert!(back.p2_tilde.distance(&p) < 1e-12);
    }

    #[test]
    fn scalar_factor_passes_through() {
        // P2 = I makes the second factor scalar.
        let p1 = random_projector(3, 1, 6).unwrap();
        let id = HermitianProjector::full(3);
        let out = yb_map(param(1.0, 1.0), &p1, param(2.0, 1.0), &id).unwrap();
        assert!(out.p1_tilde.distance(&p1) < 1e-12);
        assert!(out.p2_tilde.distance(&id) < 1e-12);
    }

    #[test]
    fn frozen_two_by_two_instance() {
        // n = 2, alpha1 = 1+i, alpha2 = 2+i, P1 = E1, P2 = symmetric axis.
        let p1 = HermitianProjector::coordinate(2, 1).unwrap();
        let half = C64::new(0.5, 0.0);
        let p2 = HermitianProjector::from_matrix(ComplexMatrix::new(
            2,
            2,
            vec![half, half, half, half],
        ))
        .unwrap();
        let out = yb_map(param(1.0, 1.0), &p1, param(2.0, 1.0), &p2).unwrap();
        assert!(out.residual <= 1e-10);
        // rank preserved through conjugation
        assert_eq!(out.p1_tilde.rank(), 1);
        assert_eq!(out.p2_tilde.rank(), 1);
        assert!((out.p1_tilde.matrix().trace() - ONE).norm() < 1e-10);
        // independent oracle: P̃₁ spans g₂(α₁)·(im P₁) ... kernel route
        // exercised in the integration suite; here cross-check via r21 round
        // trip.
        let back = r21_map(param(2.0, 1.0), param(1.0, 1.0), &out.p1_tilde, &out.p2_tilde).unwrap();
        assert!(back.p1_tilde.distance(&p1) < 1e-10);
        assert!(back.p2_tilde.distance(&p2) < 1e-10);
    }

    #[test]
    fn support_collision_detected() {
        let p1 = random_projector(2, 1, 1).unwrap();
        let p2 = random_projector(2, 1, 2).unwrap();
        let a = param(1.0, 1.0);
        assert!(matches!(yb_map(a, &p1, a, &p2), Err(Error::SupportCollision { .. })));
        // conjugate collision: {α,ᾱ} meets {ᾱ,α}
        let b = param(1.0, -1.0);
        assert!(matches!(yb_map(a, &p1, b, &p2), Err(Error::SupportCollision { .. })));
    }

    #[test]
    fn inverse_relation_on_random_inputs() {
        let mut worst = 0.0f64;
        for trial in 0..50 {
            let mut rng = rng::stream(100, trial);
            let n = 2 + (trial as usize % 3);
            let ps = rng::random_disjoint_parameters(2, false, &mut rng);
            let k = 1 + (trial as usize % (n - 1));
            let l = 1 + ((trial as usize / 2) % (n - 1));
            let p1 = crate::matrix::random_projector_with(n, k, &mut rng);
            let p2 = crate::matrix::random_projector_with(n, l, &mut rng);
            let fwd = yb_map(ps[0], &p1, ps[1], &p2).unwrap();
            let back = r21_map(ps[1], ps[0], &fwd.p1_tilde, &fwd.p2_tilde).unwrap();
            worst = worst.max(back.p1_tilde.distance(&p1)).max(back.p2_tilde.distance(&p2));
        }
        assert!(worst <= 1e-9, "inverse relation residual {worst}");
    }

    #[test]
    fn r21_agrees_with_swapped_map() {
        // R21(a2,a1) composed from the plain map and slot swaps.
        let mut rng = rng::stream(7, 0);
        let ps = rng::random_disjoint_parameters(2, false, &mut rng);
        let p1 = crate::matrix::random_projector_with(3, 1, &mut rng);
        let p2 = crate::matrix::random_projector_with(3, 2, &mut rng);
        let direct = r21_map(ps[1], ps[0], &p1, &p2).unwrap();
        let via_swap = yb_map(ps[1], &p2, ps[0], &p1).unwrap();
        assert!(direct.p1_tilde.distance(&via_swap.p2_tilde) <= 1e-10);
        assert!(direct.p2_tilde.distance(&via_swap.p1_tilde) <= 1e-10);
    }

    #[test]
    fn ybe_residual_trivial_cases() {
        let p = random_projector(3, 1, 3).unwrap();
        let mut rng = rng::stream(8, 0);
        let ps = rng::random_disjoint_parameters(3, false, &mut rng);
        // all equal projectors: both sides fix the triple
        let r = check_ybe(ps[0], ps[1], ps[2], &p, &p, &p).unwrap();
        assert!(r < 1e-12);
        // one zero projector reduces to a pairwise check
        let z = HermitianProjector::zero(3);
        let q = crate::matrix::random_projector_with(3, 2, &mut rng);
        let r = check_ybe(ps[0], ps[1], ps[2], &p, &z, &q).unwrap();
        assert!(r <= 1e-9);
    }

    #[test]
    fn ybe_residual_random_triples() {
        let mut worst = 0.0f64;
        for trial in 0..30 {
            let mut rng = rng::stream(31, trial);
            let ps = rng::random_disjoint_parameters(3, false, &mut rng);
            let ranks = [1 + (trial as usize % 2), 1 + ((trial as usize / 2) % 2), 1];
            let p1 = crate::matrix::random_projector_with(3, ranks[0], &mut rng);
            let p2 = crate::matrix::random_projector_with(3, ranks[1], &mut rng);
            let p3 = crate::matrix::random_projector_with(3, ranks[2], &mut rng);
            worst = worst.max(check_ybe(ps[0], ps[1], ps[2], &p1, &p2, &p3).unwrap());
        }
        assert!(worst <= 1e-9, "YBE residual {worst}");
    }
}
