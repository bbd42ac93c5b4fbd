//! Small dense linear algebra kernels: LU inversion with a condition
//! estimate, a complex Hermitian Jacobi eigensolver, modified Gram-Schmidt,
//! and Gaussian random unitaries.

use rand::Rng;
use rand_distr::StandardNormal;

use crate::error::{Error, Result};
use crate::matrix::{inner, norm, scale_vec, sub_vec, C64, ComplexMatrix, ZERO};
use crate::tol;

/// Inverse via LU with partial pivoting, plus the reciprocal 1-norm condition
/// estimate `1 / (‖A‖₁ ‖A⁻¹‖₁)`. Fails with `SingularMatrix` when a pivot
/// vanishes or the estimate drops below `RCOND_MIN`.
pub fn invert(a: &ComplexMatrix) -> Result<(ComplexMatrix, f64)> {
    assert!(a.is_square(), "inverse requires a square matrix");
    let n = a.rows();
    // Augmented elimination carrying the full identity block.
    let mut lu = a.clone();
    let mut inv = ComplexMatrix::identity(n);
    for col in 0..n {
        let mut pivot_row = col;
        let mut pivot_mag = lu.get(col, col).norm();
        for r in col + 1..n {
            let mag = lu.get(r, col).norm();
            if mag > pivot_mag {
                pivot_mag = mag;
                pivot_row = r;
            }
        }
        if pivot_mag < f64::MIN_POSITIVE.sqrt() {
            return Err(Error::SingularMatrix { rcond: 0.0 });
        }
        if pivot_row != col {
            for j in 0..n {
                let tmp = lu.get(col, j);
                lu.set(col, j, lu.get(pivot_row, j));
                lu.set(pivot_row, j, tmp);
                let tmp = inv.get(col, j);
                inv.set(col, j, inv.get(pivot_row, j));
                inv.set(pivot_row, j, tmp);
            }
        }
        let pivot = lu.get(col, col);
        for r in 0..n {
            if r == col {
                continue;
            }
            let factor = lu.get(r, col) / pivot;
            if factor == ZERO {
                continue;
            }
            for j in 0..n {
                let v = lu.get(r, j) - factor * lu.get(col, j);
                lu.set(r, j, v);
                let w = inv.get(r, j) - factor * inv.get(col, j);
                inv.set(r, j, w);
            }
        }
    }
    for r in 0..n {
        let pivot = lu.get(r, r);
        for j in 0..n {
            inv.set(r, j, inv.get(r, j) / pivot);
        }
    }
    let rcond = 1.0 / (one_norm(a) * one_norm(&inv)).max(f64::MIN_POSITIVE);
    if rcond < tol::RCOND_MIN {
        return Err(Error::SingularMatrix { rcond });
    }
    Ok((inv, rcond))
}

fn one_norm(a: &ComplexMatrix) -> f64 {
    (0..a.cols())
        .map(|j| (0..a.rows()).map(|i| a.get(i, j).norm()).sum::<f64>())
        .fold(0.0, f64::max)
}

/// Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi
/// rotations. Returns `(eigenvalues, V)` with `A = V diag(λ) V*`; the
/// eigenvalues are not sorted.
pub fn hermitian_eigen(a: &ComplexMatrix) -> (Vec<f64>, ComplexMatrix) {
    assert!(a.is_square());
    let n = a.rows();
    let mut h = a.hermitian_part();
    let mut v = ComplexMatrix::identity(n);
    let scale = h.frobenius_norm().max(1.0);
    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..n {
            for q in p + 1..n {
                off = off.max(h.get(p, q).norm());
            }
        }
        if off <= 1e-15 * scale {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let hpq = h.get(p, q);
                if hpq.norm() <= 1e-18 * scale {
                    continue;
                }
                // Phase that makes the (p,q) entry real positive, then a real
                // Jacobi rotation that annihilates it.
                let u = hpq.conj() / hpq.norm();
                let app = h.get(p, p).re;
                let aqq = h.get(q, q).re;
                let apq = hpq.norm();
                let theta = if (app - aqq).abs() < 1e-300 {
                    std::f64::consts::FRAC_PI_4
                } else {
                    0.5 * (2.0 * apq / (app - aqq)).atan()
                };
                let c = theta.cos();
                let s = theta.sin();
                // Column operations with G: col_p <- c*col_p + s*u*col_q,
                // col_q <- -s*conj(u)... build G explicitly for clarity.
                let gpp = C64::new(c, 0.0);
                let gpq = C64::new(-s, 0.0) * u.conj();
                let gqp = C64::new(s, 0.0) * u;
                let gqq = C64::new(c, 0.0);
                // h <- G* h G applied to rows/cols p,q only.
                for j in 0..n {
                    let hpj = h.get(p, j);
                    let hqj = h.get(q, j);
                    h.set(p, j, gpp.conj() * hpj + gqp.conj() * hqj);
                    h.set(q, j, gpq.conj() * hpj + gqq.conj() * hqj);
                }
                for i in 0..n {
                    let hip = h.get(i, p);
                    let hiq = h.get(i, q);
                    h.set(i, p, hip * gpp + hiq * gqp);
                    h.set(i, q, hip * gpq + hiq * gqq);
                }
                for i in 0..n {
                    let vip = v.get(i, p);
                    let viq = v.get(i, q);
                    v.set(i, p, vip * gpp + viq * gqp);
                    v.set(i, q, vip * gpq + viq * gqq);
                }
            }
        }
    }
    let eig = (0..n).map(|i| h.get(i, i).re).collect();
    (eig, v)
}

/// Modified Gram-Schmidt with a relative rank tolerance. Returns `None` when
/// the input is rank-deficient.
pub fn orthonormalize(vectors: &[Vec<C64>]) -> Option<Vec<Vec<C64>>> {
    let mut basis: Vec<Vec<C64>> = Vec::with_capacity(vectors.len());
    for v in vectors {
        let scale = norm(v);
        if scale <= 0.0 {
            return None;
        }
        let mut w = v.clone();
        // Two MGS passes for orthogonality at working precision.
        for _ in 0..2 {
            for q in &basis {
                let coeff = inner(q, &w);
                w = sub_vec(&w, &scale_vec(q, coeff));
            }
        }
        let r = norm(&w);
        if r <= 1e-8 * scale {
            return None;
        }
        basis.push(scale_vec(&w, C64::new(1.0 / r, 0.0)));
    }
    Some(basis)
}

/// Haar-like random unitary: QR of a complex Gaussian matrix (two independent
/// standard normals per entry) via Gram-Schmidt, whose R diagonal is real
/// positive by construction, making the factor unique.
pub fn random_unitary(n: usize, rng: &mut impl Rng) -> ComplexMatrix {
    loop {
        let cols: Vec<Vec<C64>> = (0..n)
            .map(|_| {
                (0..n)
                    .map(|_| {
                        let re: f64 = rng.sample(StandardNormal);
                        let im: f64 = rng.sample(StandardNormal);
                        C64::new(re, im)
                    })
                    .collect()
            })
            .collect();
        // A Gaussian sample is almost surely full rank; resample on the
        // measure-zero failure rather than erroring.
        if let Some(basis) = orthonormalize(&cols) {
            return ComplexMatrix::from_columns(&basis);
        }
    }
}

/// `exp(A)` by plain Taylor summation; intended for `‖A‖ ≪ 1` (finite
/// difference stencils), where a handful of terms reaches round-off.
pub fn exp_taylor(a: &ComplexMatrix) -> ComplexMatrix {
    let n = a.rows();
    let mut sum = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=24 {
        term = term.matmul(a).scale(C64::new(1.0 / k as f64, 0.0));
        sum = sum.add(&term);
        if term.frobenius_norm() < 1e-22 {
            break;
        }
    }
    sum
}
