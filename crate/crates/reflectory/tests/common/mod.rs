//! Shared helpers for the integration suites, including an independent
//! refactorization oracle that never touches the conjugator formula.

use reflectory::matrix::{
    inner, norm, outer, scale_vec, sub_vec, C64, ComplexMatrix, HermitianProjector,
};
use reflectory::simple::{eval_simple, invert_simple, SimpleElement, SpectralParameter};

/// Greedy orthonormalization that drops dependent vectors.
pub fn greedy_basis(vectors: &[Vec<C64>]) -> Vec<Vec<C64>> {
    let mut basis: Vec<Vec<C64>> = Vec::new();
    for v in vectors {
        let mut w = v.clone();
        for _ in 0..2 {
            for q in &basis {
                let c = inner(q, &w);
                w = sub_vec(&w, &scale_vec(q, c));
            }
        }
        let r = norm(&w);
        if r > 1e-8 {
            basis.push(scale_vec(&w, C64::new(1.0 / r, 0.0)));
        }
    }
    basis
}

fn projector_onto(basis: &[Vec<C64>], n: usize) -> ComplexMatrix {
    let mut p = ComplexMatrix::zeros(n, n);
    for q in basis {
        p = p.add(&outer(q, q));
    }
    p.hermitian_part()
}

/// Independent refactorization oracle for
/// `g_{α₁,P₁} g_{α₂,P₂} = g_{α₂,P̃₂} g_{α₁,P̃₁}`, built from pole/zero
/// matching instead of the conjugator:
///
/// * the right factor must absorb the zero of the product at `α₁`, so
///   `im P̃₁ = g₂(α₁)⁻¹ · im P₁`;
/// * the left factor must absorb the zero at `α₂`, so
///   `im P̃₂ = (g₁(α₂) · im(I−P₂))^⊥`.
pub fn refactor_oracle(
    alpha1: SpectralParameter,
    p1: &HermitianProjector,
    alpha2: SpectralParameter,
    p2: &HermitianProjector,
) -> (HermitianProjector, HermitianProjector) {
    let n = p1.dim();
    let g1 = SimpleElement::new(alpha1, p1.clone());
    let g2 = SimpleElement::new(alpha2, p2.clone());

    // im P̃₁ = g₂(α₁)⁻¹ im P₁
    let g2_inv_at_a1 = eval_simple(&invert_simple(&g2), alpha1.value()).unwrap();
    let im_p1 = greedy_basis(&(0..n).map(|j| p1.matrix().column(j)).collect::<Vec<_>>());
    let moved: Vec<Vec<C64>> = im_p1.iter().map(|q| g2_inv_at_a1.matvec(q)).collect();
    let p1_tilde = projector_onto(&greedy_basis(&moved), n);

    // im P̃₂ = (g₁(α₂) im(I−P₂))^⊥
    let g1_at_a2 = eval_simple(&g1, alpha2.value()).unwrap();
    let comp = p2.complement();
    let im_comp = greedy_basis(&(0..n).map(|j| comp.matrix().column(j)).collect::<Vec<_>>());
    let moved: Vec<Vec<C64>> = im_comp.iter().map(|q| g1_at_a2.matvec(q)).collect();
    let p2_tilde = ComplexMatrix::identity(n).sub(&projector_onto(&greedy_basis(&moved), n));

    (
        HermitianProjector::from_matrix(p1_tilde.hermitian_part()).expect("oracle image is a projector"),
        HermitianProjector::from_matrix(p2_tilde.hermitian_part()).expect("oracle image is a projector"),
    )
}
