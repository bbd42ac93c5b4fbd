//! Dense complex matrices and the structured matrix classes built on them:
//! Hermitian projectors and Hermitian unitaries.
//!
//! Matrices are stored row-major over `Complex<f64>`. Sizes stay small (a few
//! dozen at most), so all algorithms are straightforward dense loops.

use std::ops::{Add, Mul, Sub};

use num_complex::Complex;
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::linalg;
use crate::tol;

pub type C64 = Complex<f64>;

pub const ONE: C64 = C64::new(1.0, 0.0);
pub const ZERO: C64 = C64::new(0.0, 0.0);
pub const I: C64 = C64::new(0.0, 1.0);

/// Dense complex matrix, row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn new(rows: usize, cols: usize, data: Vec<C64>) -> Self {
        assert_eq!(data.len(), rows * cols, "data length must match dimensions");
        Self { rows, cols, data }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![ZERO; rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m.set(i, i, ONE);
        }
        m
    }

    pub fn diagonal(diag: &[C64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n, n);
        for (i, &d) in diag.iter().enumerate() {
            m.set(i, i, d);
        }
        m
    }

    /// Matrix whose columns are the given vectors.
    pub fn from_columns(cols: &[Vec<C64>]) -> Self {
        let nrows = cols.first().map_or(0, Vec::len);
        let ncols = cols.len();
        let mut m = Self::zeros(nrows, ncols);
        for (j, col) in cols.iter().enumerate() {
            assert_eq!(col.len(), nrows, "columns must have equal length");
            for (i, &v) in col.iter().enumerate() {
                m.set(i, j, v);
            }
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> C64 {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: C64) {
        debug_assert!(i < self.rows && j < self.cols);
        self.data[i * self.cols + j] = v;
    }

    pub fn entries(&self) -> &[C64] {
        &self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|c| c.re.is_finite() && c.im.is_finite())
    }

    pub fn column(&self, j: usize) -> Vec<C64> {
        (0..self.rows).map(|i| self.get(i, j)).collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        let mut out = Self::zeros(self.cols, self.rows);
        for i in 0..self.rows {
            for j in 0..self.cols {
                out.set(j, i, self.get(i, j).conj());
            }
        }
        out
    }

    pub fn trace(&self) -> C64 {
        assert!(self.is_square(), "trace requires a square matrix");
        (0..self.rows).map(|i| self.get(i, i)).sum()
    }

    pub fn scale(&self, factor: C64) -> Self {
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|c| c * factor).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        Self {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn matmul(&self, other: &Self) -> Self {
        assert_eq!(self.cols, other.rows, "dimension mismatch in matrix product");
        let mut out = Self::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self.get(i, k);
                if a == ZERO {
                    continue;
                }
                for j in 0..other.cols {
                    let v = out.get(i, j) + a * other.get(k, j);
                    out.set(i, j, v);
                }
            }
        }
        out
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        assert_eq!(self.cols, v.len(), "dimension mismatch in matrix-vector product");
        (0..self.rows)
            .map(|i| (0..self.cols).map(|j| self.get(i, j) * v[j]).sum())
            .collect()
    }

    /// Commutator `[self, other]`.
    pub fn commutator(&self, other: &Self) -> Self {
        self.matmul(other).sub(&other.matmul(self))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
    }

    /// `‖A − A*‖_F`.
    pub fn hermitian_defect(&self) -> f64 {
        self.sub(&self.adjoint()).frobenius_norm()
    }

    /// `(A + A*)/2`.
    pub fn hermitian_part(&self) -> Self {
        self.add(&self.adjoint()).scale(C64::new(0.5, 0.0))
    }

    /// Distance to the identity, `‖A − I‖_F`.
    pub fn identity_defect(&self) -> f64 {
        self.sub(&Self::identity(self.rows)).frobenius_norm()
    }
}

impl Mul for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn mul(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        self.matmul(rhs)
    }
}

impl Add for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn add(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::add(self, rhs)
    }
}

impl Sub for &ComplexMatrix {
    type Output = ComplexMatrix;
    fn sub(self, rhs: &ComplexMatrix) -> ComplexMatrix {
        ComplexMatrix::sub(self, rhs)
    }
}

// JSON encoding: {"rows":n,"cols":m,"data":[[re,im],...]} row-major.
#[derive(Serialize, Deserialize)]
struct MatrixJson {
    rows: usize,
    cols: usize,
    data: Vec<[f64; 2]>,
}

impl Serialize for ComplexMatrix {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        MatrixJson {
            rows: self.rows,
            cols: self.cols,
            data: self.data.iter().map(|c| [c.re, c.im]).collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for ComplexMatrix {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = MatrixJson::deserialize(d)?;
        if raw.data.len() != raw.rows * raw.cols {
            return Err(D::Error::custom("matrix data length does not match rows*cols"));
        }
        let data: Vec<C64> = raw.data.iter().map(|&[re, im]| C64::new(re, im)).collect();
        let m = ComplexMatrix::new(raw.rows, raw.cols, data);
        if !m.is_finite() {
            return Err(D::Error::custom("matrix entries must be finite"));
        }
        Ok(m)
    }
}

// -------------------------------------------------------------------------
// Complex vector helpers.

pub fn inner(a: &[C64], b: &[C64]) -> C64 {
    assert_eq!(a.len(), b.len());
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub fn norm(a: &[C64]) -> f64 {
    a.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt()
}

pub fn scale_vec(a: &[C64], s: C64) -> Vec<C64> {
    a.iter().map(|c| c * s).collect()
}

pub fn sub_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().zip(b).map(|(x, y)| x - y).collect()
}

pub fn add_vec(a: &[C64], b: &[C64]) -> Vec<C64> {
    a.iter().zip(b).map(|(x, y)| x + y).collect()
}

/// Outer product `a b*`.
pub fn outer(a: &[C64], b: &[C64]) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(a.len(), b.len());
    for (i, &x) in a.iter().enumerate() {
        for (j, &y) in b.iter().enumerate() {
            m.set(i, j, x * y.conj());
        }
    }
    m
}

pub fn basis_vector(n: usize, i: usize) -> Vec<C64> {
    let mut v = vec![ZERO; n];
    v[i] = ONE;
    v
}

// -------------------------------------------------------------------------
// Hermitian projectors.

/// An `n×n` Hermitian idempotent of known rank.
///
/// The constructors enforce `‖P − P*‖ ≤ tol`, `‖P² − P‖ ≤ tol`, and
/// `|tr P − rank| ≤ tol` with `tol = TOL_STRUCT`, so a value of this type can
/// be consumed without re-checking.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianProjector {
    matrix: ComplexMatrix,
    rank: usize,
}

impl HermitianProjector {
    /// Validate an explicit matrix as a Hermitian projector.
    pub fn from_matrix(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() || !matrix.is_finite() {
            return Err(Error::InvalidInput { reason: "projector must be a finite square matrix".into() });
        }
        let herm = matrix.hermitian_defect();
        let idem = matrix.matmul(&matrix).sub(&matrix).frobenius_norm();
        let tr = matrix.trace();
        let rank = tr.re.round();
        let tr_defect = (tr.re - rank).abs().max(tr.im.abs());
        let defect = herm.max(idem).max(tr_defect);
        if defect > tol::TOL_STRUCT || rank < 0.0 || rank > matrix.rows() as f64 {
            return Err(Error::ProjectorError { defect });
        }
        Ok(Self { matrix, rank: rank as usize })
    }

    /// Coordinate projector onto the first `k` axes.
    pub fn coordinate(n: usize, k: usize) -> Result<Self> {
        if k > n {
            return Err(Error::RankError { rank: k, n });
        }
        let mut m = ComplexMatrix::zeros(n, n);
        for i in 0..k {
            m.set(i, i, ONE);
        }
        Ok(Self { matrix: m, rank: k })
    }

    pub fn zero(n: usize) -> Self {
        Self { matrix: ComplexMatrix::zeros(n, n), rank: 0 }
    }

    pub fn full(n: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(n), rank: n }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn rank(&self) -> usize {
        self.rank
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// Complementary projector `I − P`.
    pub fn complement(&self) -> Self {
        let m = ComplexMatrix::identity(self.dim()).sub(&self.matrix);
        Self { matrix: m, rank: self.dim() - self.rank }
    }

    pub fn distance(&self, other: &Self) -> f64 {
        self.matrix.sub(&other.matrix).frobenius_norm()
    }
}

impl Serialize for HermitianProjector {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.matrix.serialize(s)
    }
}

impl<'de> Deserialize<'de> for HermitianProjector {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = ComplexMatrix::deserialize(d)?;
        HermitianProjector::from_matrix(m).map_err(D::Error::custom)
    }
}

/// Repair a near-projector: symmetrize, eigendecompose, and round eigenvalues
/// to {0,1}. Eigenvalues farther than `EIG_ROUND` from both 0 and 1 are a
/// genuine failure and are rejected rather than masked.
pub fn repair_projector(m: &ComplexMatrix, expected_rank: Option<usize>) -> Result<HermitianProjector> {
    let h = m.hermitian_part();
    let (eigvals, vecs) = linalg::hermitian_eigen(&h);
    let n = h.rows();
    let mut rank = 0usize;
    let mut rounded = vec![ZERO; n];
    for (i, &lam) in eigvals.iter().enumerate() {
        if (lam - 1.0).abs() <= tol::EIG_ROUND {
            rounded[i] = ONE;
            rank += 1;
        } else if lam.abs() <= tol::EIG_ROUND {
            rounded[i] = ZERO;
        } else {
            return Err(Error::ProjectorError { defect: (lam - lam.round()).abs() });
        }
    }
    if let Some(k) = expected_rank {
        if k != rank {
            return Err(Error::RankError { rank, n });
        }
    }
    let d = ComplexMatrix::diagonal(&rounded);
    let repaired = vecs.matmul(&d).matmul(&vecs.adjoint()).hermitian_part();
    Ok(HermitianProjector { matrix: repaired, rank })
}

/// Orthogonal projector onto the span of the given vectors.
pub fn projector_from_span(vectors: &[Vec<C64>]) -> Result<HermitianProjector> {
    if vectors.is_empty() {
        return Err(Error::DegenerateSpan);
    }
    let n = vectors[0].len();
    if vectors.iter().any(|v| v.len() != n) || vectors.len() > n {
        return Err(Error::DegenerateSpan);
    }
    let basis = linalg::orthonormalize(vectors).ok_or(Error::DegenerateSpan)?;
    let mut p = ComplexMatrix::zeros(n, n);
    for q in &basis {
        p = p.add(&outer(q, q));
    }
    let p = p.hermitian_part();
    Ok(HermitianProjector { matrix: p, rank: basis.len() })
}

/// Seeded random rank-`k` projector: conjugate the coordinate projector by a
/// Haar-like unitary (QR of a complex Gaussian with the R diagonal made real
/// positive). Pure function of `(n, k, seed)`.
pub fn random_projector(n: usize, k: usize, seed: u64) -> Result<HermitianProjector> {
    if k > n {
        return Err(Error::RankError { rank: k, n });
    }
    let mut rng = crate::rng::stream(seed, 0);
    Ok(random_projector_with(n, k, &mut rng))
}

/// As [`random_projector`] but drawing from a caller-provided stream.
pub fn random_projector_with(n: usize, k: usize, rng: &mut impl rand::Rng) -> HermitianProjector {
    let q = linalg::random_unitary(n, rng);
    let ek = HermitianProjector::coordinate(n, k).expect("rank checked").matrix().clone();
    let p = q.matmul(&ek).matmul(&q.adjoint()).hermitian_part();
    repair_projector(&p, Some(k)).expect("conjugated coordinate projector is a projector")
}

// -------------------------------------------------------------------------
// Hermitian unitaries.

/// An `n×n` matrix with `U = U*` and `U² = I`; the boundary conjugator.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianUnitary {
    matrix: ComplexMatrix,
}

impl HermitianUnitary {
    pub fn from_matrix(matrix: ComplexMatrix) -> Result<Self> {
        if !matrix.is_square() || !matrix.is_finite() {
            return Err(Error::InvalidInput { reason: "unitary must be a finite square matrix".into() });
        }
        let herm = matrix.hermitian_defect();
        let unit = matrix.matmul(&matrix.adjoint()).identity_defect();
        let defect = herm.max(unit);
        if defect > tol::TOL_STRUCT {
            return Err(Error::UnitarityError { defect });
        }
        Ok(Self { matrix })
    }

    /// `V I_S V*` with `I_S = diag(d_i)`, `d_i = 1` for `i ∈ S` and `−1`
    /// otherwise. Without a conjugator this is the signature matrix itself.
    /// Indices in `S` are zero-based.
    pub fn from_subset(n: usize, subset: &[usize], conjugator: Option<&ComplexMatrix>) -> Result<Self> {
        if subset.iter().any(|&i| i >= n) {
            return Err(Error::InvalidInput { reason: "subset index out of range".into() });
        }
        let mut diag = vec![C64::new(-1.0, 0.0); n];
        for &i in subset {
            diag[i] = ONE;
        }
        let is = ComplexMatrix::diagonal(&diag);
        match conjugator {
            None => Ok(Self { matrix: is }),
            Some(v) => {
                if v.rows() != n || v.cols() != n {
                    return Err(Error::InvalidInput { reason: "conjugator dimension mismatch".into() });
                }
                let defect = v.matmul(&v.adjoint()).identity_defect();
                if defect > tol::TOL_STRUCT {
                    return Err(Error::UnitarityError { defect });
                }
                let u = v.matmul(&is).matmul(&v.adjoint()).hermitian_part();
                Ok(Self { matrix: u })
            }
        }
    }

    pub fn identity(n: usize) -> Self {
        Self { matrix: ComplexMatrix::identity(n) }
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.matrix
    }

    pub fn dim(&self) -> usize {
        self.matrix.rows()
    }

    /// `U P U*`, re-validated as a projector.
    pub fn conjugate_projector(&self, p: &HermitianProjector) -> HermitianProjector {
        assert_eq!(self.dim(), p.dim());
        let m = self.matrix.matmul(p.matrix()).matmul(&self.matrix.adjoint()).hermitian_part();
        repair_projector(&m, Some(p.rank())).expect("unitary conjugation preserves projectors")
    }

    /// `U x` on vectors.
    pub fn apply(&self, x: &[C64]) -> Vec<C64> {
        self.matrix.matvec(x)
    }
}

impl Serialize for HermitianUnitary {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.matrix.serialize(s)
    }
}

impl<'de> Deserialize<'de> for HermitianUnitary {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let m = ComplexMatrix::deserialize(d)?;
        HermitianUnitary::from_matrix(m).map_err(D::Error::custom)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> C64 {
        C64::new(re, im)
    }

    #[test]
    fn projector_from_coordinate_axis() {
        let p = projector_from_span(&[basis_vector(2, 0)]).unwrap();
        assert_eq!(p.rank(), 1);
        assert!(p.distance(&HermitianProjector::coordinate(2, 1).unwrap()) < 1e-14);
    }

    #[test]
    fn projector_from_symmetric_axis() {
        let v = vec![c(1.0, 0.0), c(1.0, 0.0)];
        let p = projector_from_span(&[v]).unwrap();
        for i in 0..2 {
            for j in 0..2 {
                assert!((p.matrix().get(i, j) - c(0.5, 0.0)).norm() < 1e-14);
            }
        }
    }

    #[test]
    fn projector_from_complex_span() {
        // span{(1, i)} -> (1/2)[[1, -i], [i, 1]]
        let p = projector_from_span(&[vec![c(1.0, 0.0), c(0.0, 1.0)]]).unwrap();
        let m = p.matrix();
        assert!((m.get(0, 0) - c(0.5, 0.0)).norm() < 1e-14);
        assert!((m.get(0, 1) - c(0.0, -0.5)).norm() < 1e-14);
        assert!((m.get(1, 0) - c(0.0, 0.5)).norm() < 1e-14);
        assert!((m.get(1, 1) - c(0.5, 0.0)).norm() < 1e-14);
        // direct arithmetic: P² = P, P* = P, tr P = 1
        assert!(m.matmul(m).sub(m).frobenius_norm() < 1e-14);
        assert!(m.hermitian_defect() < 1e-14);
        assert!((m.trace() - ONE).norm() < 1e-14);
    }

    #[test]
    fn dependent_span_rejected() {
        let v1 = vec![c(1.0, 0.0), c(2.0, 0.0)];
        let v2 = vec![c(2.0, 0.0), c(4.0, 0.0)];
        assert_eq!(projector_from_span(&[v1, v2]), Err(Error::DegenerateSpan));
        assert_eq!(projector_from_span(&[vec![ZERO, ZERO]]), Err(Error::DegenerateSpan));
    }

    #[test]
    fn random_projector_extremes_and_determinism() {
        let z = random_projector(3, 0, 11).unwrap();
        assert!(z.matrix().frobenius_norm() < 1e-12);
        let f = random_projector(3, 3, 11).unwrap();
        assert!(f.matrix().identity_defect() < 1e-12);
        let a = random_projector(2, 1, 7).unwrap();
        let b = random_projector(2, 1, 7).unwrap();
        assert_eq!(a.matrix().entries(), b.matrix().entries());
        assert!(random_projector(2, 3, 0).is_err());
    }

    #[test]
    fn random_projector_invariants_up_to_n16() {
        for &(n, k, seed) in &[(2usize, 1usize, 1u64), (4, 2, 2), (8, 3, 3), (16, 7, 4)] {
            let p = random_projector(n, k, seed).unwrap();
            let m = p.matrix();
            assert!(m.matmul(m).sub(m).frobenius_norm() <= 1e-12);
            assert!(m.hermitian_defect() <= 1e-12);
            assert!((m.trace().re - k as f64).abs() <= 1e-12);
        }
    }

    #[test]
    fn hermitian_unitary_signature() {
        let u = HermitianUnitary::from_subset(2, &[0], None).unwrap();
        assert!((u.matrix().get(0, 0) - ONE).norm() < 1e-15);
        assert!((u.matrix().get(1, 1) + ONE).norm() < 1e-15);
        let id = HermitianUnitary::from_subset(3, &[0, 1, 2], None).unwrap();
        assert!(id.matrix().identity_defect() < 1e-15);
    }

    #[test]
    fn hermitian_unitary_conjugated() {
        // V = (1/sqrt 2)[[1,1],[1,-1]], S = {0} -> [[0,1],[1,0]]
        let s = 1.0 / 2.0_f64.sqrt();
        let v = ComplexMatrix::new(2, 2, vec![c(s, 0.0), c(s, 0.0), c(s, 0.0), c(-s, 0.0)]);
        let u = HermitianUnitary::from_subset(2, &[0], Some(&v)).unwrap();
        assert!((u.matrix().get(0, 1) - ONE).norm() < 1e-14);
        assert!((u.matrix().get(1, 0) - ONE).norm() < 1e-14);
        assert!(u.matrix().get(0, 0).norm() < 1e-14);
        // U² = I
        assert!(u.matrix().matmul(u.matrix()).identity_defect() < 1e-12);
    }

    #[test]
    fn non_unitary_conjugator_rejected() {
        let v = ComplexMatrix::new(2, 2, vec![ONE, ONE, ZERO, ONE]);
        assert!(matches!(
            HermitianUnitary::from_subset(2, &[0], Some(&v)),
            Err(Error::UnitarityError { .. })
        ));
    }

    #[test]
    fn repair_rounds_near_projector() {
        let p = random_projector(3, 2, 5).unwrap();
        let mut m = p.matrix().clone();
        m.set(0, 1, m.get(0, 1) + c(1e-8, -1e-8));
        let fixed = repair_projector(&m, Some(2)).unwrap();
        let fm = fixed.matrix();
        assert!(fm.matmul(fm).sub(fm).frobenius_norm() < 1e-13);
        assert!(fixed.distance(&p) < 1e-7);
    }

    #[test]
    fn repair_rejects_far_from_projector() {
        let m = ComplexMatrix::diagonal(&[c(0.5, 0.0), c(1.0, 0.0)]);
        assert!(repair_projector(&m, None).is_err());
    }

    #[test]
    fn matrix_json_round_trip() {
        let p = random_projector(3, 1, 9).unwrap();
        let s = serde_json::to_string(p.matrix()).unwrap();
        assert!(s.starts_with("{\"rows\":3,\"cols\":3,\"data\":[["));
        let m: ComplexMatrix = serde_json::from_str(&s).unwrap();
        assert!(m.sub(p.matrix()).frobenius_norm() < 1e-15);
    }
}
