//! Boundary refactorization and the parametric reflection map on projectors.
//!
//! For `α` off both axes the product `σ(g_{α,P}) g_{α,P}` refactors uniquely
//! as `g_{α,P̃₂} g_{−ᾱ,P̃₁}` with
//!
//! ```text
//! P̃₂ = φ P φ⁻¹,   φ = 2α I + (ᾱ − α)(P + UPU*),   P̃₁ = U P̃₂ U*,
//! ```
//!
//! and the reflection map is `B(α)(P) = U φ P φ⁻¹ U*`. Restricted to the
//! graph `{(UPU*, P)}` this is the reduced Yang-Baxter map; `B` flips the
//! parameter to `τ(α) = −ᾱ`, which callers track via
//! [`SpectralParameter::tau`].

use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::{ComplexMatrix, HermitianProjector, HermitianUnitary, repair_projector};
use crate::simple::{eval_simple, sample_points_avoiding, SimpleElement, SpectralParameter};
use crate::tol;
use crate::yang_baxter::{r21_map, yb_map};

/// Outcome of the boundary refactorization; satisfies `P̃₁ = U P̃₂ U*`.
#[derive(Debug, Clone)]
pub struct BoundaryPair {
    pub p1_tilde: HermitianProjector,
    pub p2_tilde: HermitianProjector,
    pub phi: ComplexMatrix,
    pub residual: f64,
}

/// The conjugator `φ = 2α I + (ᾱ − α)(P + UPU*)`.
fn boundary_phi(alpha: SpectralParameter, p: &HermitianProjector, u: &HermitianUnitary) -> ComplexMatrix {
    let a = alpha.value();
    let mirrored = u.conjugate_projector(p);
    ComplexMatrix::identity(p.dim())
        .scale(a + a)
        .add(&p.matrix().add(mirrored.matrix()).scale(a.conj() - a))
}

/// Solve `σ(g_{α,P}) g_{α,P} = g_{α,P̃₂} g_{−ᾱ,P̃₁}`.
pub fn boundary_refactor(
    alpha: SpectralParameter,
    p: &HermitianProjector,
    u: &HermitianUnitary,
) -> Result<BoundaryPair> {
    alpha.require_off_axes()?;
    assert_eq!(p.dim(), u.dim(), "projector and boundary matrix dimensions must agree");
    let phi = boundary_phi(alpha, p, u);
    let (phi_inv, _rcond) = linalg::invert(&phi)?;
    let p2_tilde = repair_projector(&phi.matmul(p.matrix()).matmul(&phi_inv), Some(p.rank()))?;
    let p1_tilde = u.conjugate_projector(&p2_tilde);

    let mirrored = u.conjugate_projector(p);
    let residual = boundary_residual(alpha, p, &mirrored, &p1_tilde, &p2_tilde)?;
    Ok(BoundaryPair { p1_tilde, p2_tilde, phi, residual })
}

fn boundary_residual(
    alpha: SpectralParameter,
    p: &HermitianProjector,
    mirrored: &HermitianProjector,
    p1_tilde: &HermitianProjector,
    p2_tilde: &HermitianProjector,
) -> Result<f64> {
    let tau = alpha.tau();
    let lhs1 = SimpleElement::new(tau, mirrored.clone());
    let lhs2 = SimpleElement::new(alpha, p.clone());
    let rhs1 = SimpleElement::new(alpha, p2_tilde.clone());
    let rhs2 = SimpleElement::new(tau, p1_tilde.clone());
    let poles = [alpha.conj(), tau.conj()];
    let mut worst = 0.0f64;
    for z in sample_points_avoiding(&poles, tol::SAMPLE_COUNT) {
        let lhs = eval_simple(&lhs1, z)?.matmul(&eval_simple(&lhs2, z)?);
        let rhs = eval_simple(&rhs1, z)?.matmul(&eval_simple(&rhs2, z)?);
        worst = worst.max(lhs.sub(&rhs).frobenius_norm());
    }
    Ok(worst)
}

/// The parametric reflection map `B(α)(P) = U φ P φ⁻¹ U*` on the rank-`k`
/// stratum, `1 ≤ k ≤ n−1`.
pub fn b_map(
    alpha: SpectralParameter,
    p: &HermitianProjector,
    u: &HermitianUnitary,
) -> Result<HermitianProjector> {
    if p.rank() == 0 || p.rank() == p.dim() {
        return Err(Error::RankError { rank: p.rank(), n: p.dim() });
    }
    let pair = boundary_refactor(alpha, p, u)?;
    Ok(pair.p1_tilde)
}

/// The reduced Yang-Baxter map on the graph `{(UPU*, P)}`:
/// `(UPU*, P) ↦ (B(α)(P), U B(α)(P) U*)`.
pub fn reduced_yb_on_graph(
    alpha: SpectralParameter,
    p: &HermitianProjector,
    u: &HermitianUnitary,
) -> Result<(HermitianProjector, HermitianProjector)> {
    let pair = boundary_refactor(alpha, p, u)?;
    // first component B(α)(P) = P̃₁, second its mirror image P̃₂
    Ok((pair.p1_tilde, pair.p2_tilde))
}

/// Residual of the generalized parametric reflection equation
///
/// ```text
/// B₁(α₁) R₂₁(τ(α₂),α₁) B₂(α₂) R₁₂(α₁,α₂)
///   = R₂₁(τ(α₂),τ(α₁)) B₂(α₂) R₁₂(τ(α₁),α₂) B₁(α₁)
/// ```
///
/// applied to `(P₁, P₂)`; maps compose right to left, `Bᵢ` acts on slot `i`
/// and flips that slot's parameter to `τ(αᵢ)`.
pub fn check_reflection_equation(
    alpha1: SpectralParameter,
    alpha2: SpectralParameter,
    p1: &HermitianProjector,
    p2: &HermitianProjector,
    u: &HermitianUnitary,
) -> Result<f64> {
    alpha1.require_off_axes()?;
    alpha2.require_off_axes()?;
    let (lhs1, lhs2) = reflection_lhs(alpha1, alpha2, p1, p2, u)?;
    let (rhs1, rhs2) = reflection_rhs(alpha1, alpha2, p1, p2, u)?;
    Ok(lhs1.distance(&rhs1).max(lhs2.distance(&rhs2)))
}

fn reflection_lhs(
    alpha1: SpectralParameter,
    alpha2: SpectralParameter,
    p1: &HermitianProjector,
    p2: &HermitianProjector,
    u: &HermitianUnitary,
) -> Result<(HermitianProjector, HermitianProjector)> {
    // R₁₂(α₁, α₂)
    let step = yb_map(alpha1, p1, alpha2, p2)?;
    let (x1, x2) = (step.p1_tilde, step.p2_tilde);
    // B₂(α₂): slot 2, parameter becomes τ(α₂)
    let x2 = b_map(alpha2, &x2, u)?;
    // R₂₁(τ(α₂), α₁)
    let step = r21_map(alpha2.tau(), alpha1, &x1, &x2)?;
    let (x1, x2) = (step.p1_tilde, step.p2_tilde);
    // B₁(α₁)
    let x1 = b_map(alpha1, &x1, u)?;
    Ok((x1, x2))
}

fn reflection_rhs(
    alpha1: SpectralParameter,
    alpha2: SpectralParameter,
    p1: &HermitianProjector,
    p2: &HermitianProjector,
    u: &HermitianUnitary,
) -> Result<(HermitianProjector, HermitianProjector)> {
    // B₁(α₁)
    let x1 = b_map(alpha1, p1, u)?;
    // R₁₂(τ(α₁), α₂)
    let step = yb_map(alpha1.tau(), &x1, alpha2, p2)?;
    let (x1, x2) = (step.p1_tilde, step.p2_tilde);
    // B₂(α₂)
    let x2 = b_map(alpha2, &x2, u)?;
    // R₂₁(τ(α₂), τ(α₁))
    let step = r21_map(alpha2.tau(), alpha1.tau(), &x1, &x2)?;
    Ok((step.p1_tilde, step.p2_tilde))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::matrix::{random_projector, random_projector_with, C64};
    use crate::rng;

    fn param(re: f64, im: f64) -> SpectralParameter {
        SpectralParameter::new(C64::new(re, im)).unwrap()
    }

    #[test]
    fn identity_boundary_is_trivial() {
        let p = random_projector(3, 1, 2).unwrap();
        let u = HermitianUnitary::identity(3);
        let pair = boundary_refactor(param(1.0, 1.0), &p, &u).unwrap();
        assert!(pair.p1_tilde.distance(&p) < 1e-12);
        assert!(pair.p2_tilde.distance(&p) < 1e-12);
        assert!(pair.residual < tol::TOL_REFAC);
        let b = b_map(param(1.0, 1.0), &p, &u).unwrap();
        assert!(b.distance(&p) < 1e-12);
        // the reduced map is the identity on the diagonal graph
        let (g1, g2) = reduced_yb_on_graph(param(1.0, 1.0), &p, &u).unwrap();
        assert!(g1.distance(&p) < 1e-12 && g2.distance(&p) < 1e-12);
    }

    #[test]
    fn commuting_boundary_fixes_coordinate_projector() {
        let p = HermitianProjector::coordinate(2, 1).unwrap();
        let u = HermitianUnitary::from_subset(2, &[0], None).unwrap();
        let pair = boundary_refactor(param(1.0, 1.0), &p, &u).unwrap();
        assert!(pair.p1_tilde.distance(&p) < 1e-12);
        assert!(pair.p2_tilde.distance(&p) < 1e-12);
    }

    #[test]
    fn frozen_symmetric_axis_instance() {
        // n=2, alpha=1+i, U=diag(1,-1), P onto span{(1,1)}: B maps it to the
        // projector onto span{(1,-1)}.
        let p = crate::matrix::projector_from_span(&[vec![C64::new(1.0, 0.0), C64::new(1.0, 0.0)]]).unwrap();
        let expect = crate::matrix::projector_from_span(&[vec![C64::new(1.0, 0.0), C64::new(-1.0, 0.0)]]).unwrap();
        let u = HermitianUnitary::from_subset(2, &[0], None).unwrap();
        let pair = boundary_refactor(param(1.0, 1.0), &p, &u).unwrap();
        assert!(pair.residual <= tol::TOL_REFAC);
        assert!(pair.p1_tilde.distance(&u.conjugate_projector(&pair.p2_tilde)) < 1e-12);
        let b = b_map(param(1.0, 1.0), &p, &u).unwrap();
        assert!(b.distance(&expect) < 1e-10, "distance {}", b.distance(&expect));
    }

    #[test]
    fn axis_parameters_rejected() {
        let p = random_projector(2, 1, 3).unwrap();
        let u = HermitianUnitary::identity(2);
        assert!(matches!(
            boundary_refactor(param(0.0, 1.0), &p, &u),
            Err(Error::AxisError { .. })
        ));
    }

    #[test]
    fn degenerate_ranks_pass_refactor_but_not_b_map() {
        let u = HermitianUnitary::from_subset(2, &[0], None).unwrap();
        let z = HermitianProjector::zero(2);
        let pair = boundary_refactor(param(1.0, 1.0), &z, &u).unwrap();
        assert!(pair.p2_tilde.distance(&z) < 1e-13);
        assert!(matches!(b_map(param(1.0, 1.0), &z, &u), Err(Error::RankError { .. })));
        let f = HermitianProjector::full(2);
        assert!(matches!(b_map(param(1.0, 1.0), &f, &u), Err(Error::RankError { .. })));
    }

    #[test]
    fn involution_property() {
        let mut worst = 0.0f64;
        for trial in 0..50 {
            let mut rng = rng::stream(200, trial);
            let n = 2 + (trial as usize % 3);
            let a = rng::random_disjoint_parameters(1, true, &mut rng)[0];
            let k = 1 + (trial as usize % (n - 1));
            let p = random_projector_with(n, k, &mut rng);
            let u = rng::random_boundary(n, &mut rng);
            let once = b_map(a, &p, &u).unwrap();
            let twice = b_map(a.tau(), &once, &u).unwrap();
            worst = worst.max(twice.distance(&p));
        }
        assert!(worst <= 1e-9, "involution residual {worst}");
    }

    #[test]
    fn graph_invariance_via_unrestricted_map() {
        let mut worst = 0.0f64;
        for trial in 0..30 {
            let mut rng = rng::stream(300, trial);
            let n = 2 + (trial as usize % 3);
            let a = rng::random_disjoint_parameters(1, true, &mut rng)[0];
            let p = random_projector_with(n, 1 + (trial as usize % (n - 1)), &mut rng);
            let u = rng::random_boundary(n, &mut rng);
            let up = u.conjugate_projector(&p);
            let out = yb_map(a.tau(), &up, a, &p).unwrap();
            // output stays on the graph of P ↦ UPU*
            worst = worst.max(out.p1_tilde.distance(&u.conjugate_projector(&out.p2_tilde)));
            // and agrees with the reduced map
            let (b1, b2) = reduced_yb_on_graph(a, &p, &u).unwrap();
            worst = worst.max(out.p1_tilde.distance(&b1)).max(out.p2_tilde.distance(&b2));
        }
        assert!(worst <= 1e-9, "graph invariance residual {worst}");
    }

    #[test]
    fn reflection_equation_identity_boundary() {
        let mut rng = rng::stream(400, 0);
        let ps = rng::random_disjoint_parameters(2, true, &mut rng);
        let p1 = random_projector_with(3, 1, &mut rng);
        let p2 = random_projector_with(3, 2, &mut rng);
        let u = HermitianUnitary::identity(3);
        let r = check_reflection_equation(ps[0], ps[1], &p1, &p2, &u).unwrap();
        assert!(r <= 1e-9, "residual {r}");
    }

    #[test]
    fn reflection_equation_random_instances() {
        let mut worst = 0.0f64;
        for trial in 0..25 {
            let mut rng = rng::stream(500, trial);
            let ps = rng::random_disjoint_parameters(2, true, &mut rng);
            let k = 1 + (trial as usize % 2);
            let l = 1 + ((trial as usize / 2) % 2);
            let p1 = random_projector_with(3, k, &mut rng);
            let p2 = random_projector_with(3, l, &mut rng);
            let u = rng::random_boundary(3, &mut rng);
            worst = worst.max(check_reflection_equation(ps[0], ps[1], &p1, &p2, &u).unwrap());
        }
        assert!(worst <= 1e-9, "reflection equation residual {worst}");
    }

    #[test]
    fn conjugacy_through_graph_machinery() {
        // B(α) equals (c,id)⁻¹ ∘ S ∘ R_red(τ(α),α) ∘ (c,id) pointwise.
        let mut worst = 0.0f64;
        for trial in 0..20 {
            let mut rng = rng::stream(600, trial);
            let a = rng::random_disjoint_parameters(1, true, &mut rng)[0];
            let n = 2 + (trial as usize % 2);
            let p = random_projector_with(n, 1, &mut rng);
            let u = rng::random_boundary(n, &mut rng);
            // (c,id): P ↦ (UPU*, P); R_red via the unrestricted solver; S swaps;
            // (c,id)⁻¹ reads the second slot.
            let up = u.conjugate_projector(&p);
            let out = yb_map(a.tau(), &up, a, &p).unwrap();
            let swapped = (out.p2_tilde.clone(), out.p1_tilde.clone());
            let via_graph = swapped.1.clone();
            let check = u.conjugate_projector(&swapped.0);
            worst = worst.max(via_graph.distance(&check));
            let direct = b_map(a, &p, &u).unwrap();
            worst = worst.max(via_graph.distance(&direct));
        }
        assert!(worst <= 1e-9, "conjugacy residual {worst}");
    }
}
