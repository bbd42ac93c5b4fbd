//! Symplectic 2-forms and finite-difference verification of the
//! symplectomorphism claims.
//!
//! On the rank-`k` projector stratum the orbit form is
//! `ω(P)([X,P],[Y,P]) = i tr P[X,Y]`; a tangent vector `V` (Hermitian, with
//! `VP + PV = V`) corresponds to `X = [V,P]`, so
//! `ω(P)(V,W) = i tr P[[V,P],[W,P]]`. The Fubini-Study form on CP^{n−1} is
//! its pullback along `[p] ↦ π_{[p]}`.
//!
//! Tangent maps are computed by central differences along manifold curves
//! (`t ↦ e^{tX} P e^{−tX}` and `t ↦ [p + tv]`), once with step `h` and once
//! with `h/2` for a Richardson-extrapolated comparison.

use crate::error::{Error, Result};
use crate::linalg;
use crate::matrix::{
    add_vec, inner, norm, outer, scale_vec, sub_vec, C64, ComplexMatrix, HermitianProjector,
};
use crate::projective::{j_delta, n_body_reflection, PolarizationEnsemble, ProjectivePoint, Schedule};
use crate::reflection::b_map;
use crate::rng;
use crate::tol;
use crate::yang_baxter::yb_map;

/// Hermitian tangent vector at a projector, `‖VP + PV − V‖ ≤ tol`.
#[derive(Debug, Clone)]
pub struct ProjectorTangent {
    pub base: HermitianProjector,
    pub vector: ComplexMatrix,
}

impl ProjectorTangent {
    pub fn new(base: HermitianProjector, vector: ComplexMatrix) -> Result<Self> {
        check_projector_tangent(&base, &vector)?;
        Ok(Self { base, vector })
    }
}

/// Horizontal tangent vector at a projective point, `⟨p, v⟩ = 0`.
#[derive(Debug, Clone)]
pub struct ProjectiveTangent {
    pub base: ProjectivePoint,
    pub vector: Vec<C64>,
}

impl ProjectiveTangent {
    pub fn new(base: ProjectivePoint, vector: Vec<C64>) -> Result<Self> {
        let defect = inner(base.rep(), &vector).norm();
        if defect > tol::TOL_STRUCT {
            return Err(Error::TangencyError { defect });
        }
        Ok(Self { base, vector })
    }
}

fn check_projector_tangent(p: &HermitianProjector, v: &ComplexMatrix) -> Result<()> {
    let herm = v.hermitian_defect();
    let pm = p.matrix();
    let tangency = v.matmul(pm).add(&pm.matmul(v)).sub(v).frobenius_norm();
    let defect = herm.max(tangency);
    let scale = v.frobenius_norm().max(1.0);
    if defect > tol::TOL_STRUCT * scale.max(1.0) * 10.0 {
        return Err(Error::TangencyError { defect });
    }
    Ok(())
}

/// The orbit 2-form `ω(P)(V,W) = i tr P[[V,P],[W,P]]`; real up to round-off.
pub fn omega_orbit(p: &HermitianProjector, v: &ComplexMatrix, w: &ComplexMatrix) -> Result<f64> {
    check_projector_tangent(p, v)?;
    check_projector_tangent(p, w)?;
    let pm = p.matrix();
    let x = v.commutator(pm);
    let y = w.commutator(pm);
    let val = crate::matrix::I * pm.matmul(&x.commutator(&y)).trace();
    if val.im.abs() > 1e-10 * (1.0 + val.re.abs()) {
        return Err(Error::TangencyError { defect: val.im.abs() });
    }
    Ok(val.re)
}

/// Fubini-Study form via the rank-1 pushforward `u ↦ u p* + p u*`.
pub fn omega_fs(p: &ProjectivePoint, u: &[C64], v: &[C64]) -> Result<f64> {
    let tu = push_point_tangent_to_projector(p, u);
    let tv = push_point_tangent_to_projector(p, v);
    omega_orbit(&j_delta(p), &tu, &tv)
}

fn push_point_tangent_to_projector(p: &ProjectivePoint, u: &[C64]) -> ComplexMatrix {
    outer(u, p.rep()).add(&outer(p.rep(), u))
}

/// Independent affine-chart evaluation of the Fubini-Study form, for
/// cross-checking the pullback route. Uses the chart where the largest
/// component of `p` is fixed.
pub fn omega_fs_chart(p: &ProjectivePoint, u: &[C64], v: &[C64]) -> Result<f64> {
    let rep = p.rep();
    let mut j = 0usize;
    for (i, c) in rep.iter().enumerate() {
        if c.norm() > rep[j].norm() {
            j = i;
        }
    }
    let pj = rep[j];
    if pj.norm() < 1e-12 {
        return Err(Error::DegenerateImage { norm: pj.norm() });
    }
    // affine coordinates w = p / p_j and their variations
    let w: Vec<C64> = rep.iter().map(|&c| c / pj).collect();
    let dw = |t: &[C64]| -> Vec<C64> {
        rep.iter()
            .zip(t)
            .map(|(&pi, &ti)| ti / pj - pi * t[j] / (pj * pj))
            .collect()
    };
    let du = dw(u);
    let dv = dw(v);
    // F = Σ|wᵢ|² (the fixed coordinate contributes the Kähler potential's 1)
    let f = C64::new(w.iter().map(|c| c.norm_sqr()).sum::<f64>(), 0.0);
    let a = inner(&dv, &du);
    let b = inner(&w, &du) * inner(&dv, &w);
    // ω = −2 Im(⟨dv,du⟩/F − ⟨w,du⟩⟨dv,w⟩/F²)
    let raw = a / f - b / (f * f);
    Ok(-2.0 * raw.im)
}

/// Random unit-norm tangent `[X, P]` with `X` anti-Hermitian Gaussian.
pub fn random_projector_tangent(p: &HermitianProjector, rng: &mut impl rand::Rng) -> ComplexMatrix {
    let n = p.dim();
    loop {
        let mut x = ComplexMatrix::zeros(n, n);
        for i in 0..n {
            for j in 0..n {
                let g = rng::gaussian_complex_vector(1, rng)[0];
                x.set(i, j, g);
            }
        }
        let anti = x.sub(&x.adjoint()).scale(C64::new(0.5, 0.0));
        let v = anti.commutator(p.matrix());
        let r = v.frobenius_norm();
        if r > 1e-8 {
            return v.scale(C64::new(1.0 / r, 0.0));
        }
    }
}

/// Tangent-space spanning set `[X_m, P]` over a basis of the anti-Hermitian
/// matrices, zero vectors dropped, each normalized.
pub fn projector_tangent_basis(p: &HermitianProjector) -> Vec<ComplexMatrix> {
    let n = p.dim();
    let mut xs: Vec<ComplexMatrix> = Vec::new();
    for a in 0..n {
        let mut x = ComplexMatrix::zeros(n, n);
        x.set(a, a, crate::matrix::I);
        xs.push(x);
        for b in a + 1..n {
            let mut x = ComplexMatrix::zeros(n, n);
            x.set(a, b, crate::matrix::ONE);
            x.set(b, a, -crate::matrix::ONE);
            xs.push(x);
            let mut x = ComplexMatrix::zeros(n, n);
            x.set(a, b, crate::matrix::I);
            x.set(b, a, crate::matrix::I);
            xs.push(x);
        }
    }
    let mut out = Vec::new();
    for x in xs {
        let v = x.commutator(p.matrix());
        let r = v.frobenius_norm();
        if r > 1e-10 {
            out.push(v.scale(C64::new(1.0 / r, 0.0)));
        }
    }
    out
}

/// Random unit horizontal tangent at a projective point.
pub fn random_horizontal_tangent(p: &ProjectivePoint, rng: &mut impl rand::Rng) -> Vec<C64> {
    loop {
        let g = rng::gaussian_complex_vector(p.dim(), rng);
        let coeff = inner(p.rep(), &g);
        let v = sub_vec(&g, &scale_vec(p.rep(), coeff));
        let r = norm(&v);
        if r > 1e-8 {
            return scale_vec(&v, C64::new(1.0 / r, 0.0));
        }
    }
}

/// Horizontal spanning set at `p`: an orthonormal complement basis and its
/// `i`-rotations.
pub fn horizontal_tangent_basis(p: &ProjectivePoint) -> Vec<Vec<C64>> {
    let n = p.dim();
    let mut cols: Vec<Vec<C64>> = vec![p.rep().to_vec()];
    for i in 0..n {
        cols.push(crate::matrix::basis_vector(n, i));
    }
    let full = linalg_orthonormalize_greedy(&cols);
    let mut out = Vec::new();
    for b in full.into_iter().skip(1) {
        out.push(b.clone());
        out.push(scale_vec(&b, crate::matrix::I));
    }
    out
}

/// Orthonormalize, silently skipping dependent vectors.
fn linalg_orthonormalize_greedy(vectors: &[Vec<C64>]) -> Vec<Vec<C64>> {
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

// -------------------------------------------------------------------------
// Finite-difference tangent maps.

/// Point on the curve `t ↦ e^{tX} P e^{−tX}` with `X = [V, P]`. The
/// conjugated matrix is a projector to working precision already;
/// eigenvalue rounding would only add noise to the stencil.
fn projector_curve(p: &HermitianProjector, v: &ComplexMatrix, t: f64) -> HermitianProjector {
    let x = v.commutator(p.matrix()).scale(C64::new(t, 0.0));
    let e = linalg::exp_taylor(&x);
    let moved = e.matmul(p.matrix()).matmul(&e.adjoint());
    HermitianProjector::from_matrix(moved.hermitian_part())
        .expect("conjugated projector stays a projector")
}

/// Point on the curve `t ↦ [p + t v]`.
fn point_curve(p: &ProjectivePoint, v: &[C64], t: f64) -> ProjectivePoint {
    let moved = add_vec(p.rep(), &scale_vec(v, C64::new(t, 0.0)));
    ProjectivePoint::new(moved).expect("short curve keeps a nonzero representative")
}

/// Project a Hermitian matrix onto the tangent space at `Q`: keep the
/// off-diagonal blocks `Q X (I−Q) + (I−Q) X Q`.
fn project_to_projector_tangent(q: &HermitianProjector, x: &ComplexMatrix) -> ComplexMatrix {
    let h = x.hermitian_part();
    let qm = q.matrix();
    let comp = q.complement();
    let cm = comp.matrix();
    qm.matmul(&h).matmul(cm).add(&cm.matmul(&h).matmul(qm))
}

/// Align `q`'s phase with `center` and subtract: the raw difference used by
/// the central stencils.
fn aligned_difference(q: &ProjectivePoint, center: &ProjectivePoint) -> Vec<C64> {
    let c = inner(q.rep(), center.rep());
    let phase = if c.norm() > 1e-14 { c / c.norm() } else { crate::matrix::ONE };
    sub_vec(&scale_vec(q.rep(), phase), center.rep())
}

/// Central-difference pushforward of a projector-tuple map along the tuple
/// tangent `vs`, one value per slot.
fn pushforward_projector_tuple<F>(
    map: &F,
    bases: &[HermitianProjector],
    vs: &[ComplexMatrix],
    images: &[HermitianProjector],
    h: f64,
) -> Result<Vec<ComplexMatrix>>
where
    F: Fn(&[HermitianProjector]) -> Result<Vec<HermitianProjector>>,
{
    let plus: Vec<HermitianProjector> =
        bases.iter().zip(vs).map(|(p, v)| projector_curve(p, v, h)).collect();
    let minus: Vec<HermitianProjector> =
        bases.iter().zip(vs).map(|(p, v)| projector_curve(p, v, -h)).collect();
    let fp = map(&plus)?;
    let fm = map(&minus)?;
    let mut out = Vec::with_capacity(bases.len());
    for i in 0..bases.len() {
        let diff = fp[i].matrix().sub(fm[i].matrix()).scale(C64::new(0.5 / h, 0.0));
        out.push(project_to_projector_tangent(&images[i], &diff));
    }
    Ok(out)
}

/// Central-difference pushforward of a point-tuple map.
fn pushforward_point_tuple<F>(
    map: &F,
    bases: &[ProjectivePoint],
    vs: &[Vec<C64>],
    images: &[ProjectivePoint],
    h: f64,
) -> Result<Vec<Vec<C64>>>
where
    F: Fn(&[ProjectivePoint]) -> Result<Vec<ProjectivePoint>>,
{
    let plus: Vec<ProjectivePoint> = bases.iter().zip(vs).map(|(p, v)| point_curve(p, v, h)).collect();
    let minus: Vec<ProjectivePoint> = bases.iter().zip(vs).map(|(p, v)| point_curve(p, v, -h)).collect();
    let fp = map(&plus)?;
    let fm = map(&minus)?;
    let mut out = Vec::with_capacity(bases.len());
    for i in 0..bases.len() {
        let dp = aligned_difference(&fp[i], &images[i]);
        let dm = aligned_difference(&fm[i], &images[i]);
        let raw = scale_vec(&sub_vec(&dp, &dm), C64::new(0.5 / h, 0.0));
        // horizontal projection at the image
        let c = inner(images[i].rep(), &raw);
        out.push(sub_vec(&raw, &scale_vec(images[i].rep(), c)));
    }
    Ok(out)
}

/// Single-slot convenience wrapper: finite-difference tangent of a projector
/// map.
pub fn pushforward_projector<F>(
    map: F,
    base: &HermitianProjector,
    tangent: &ComplexMatrix,
    h: f64,
) -> Result<ComplexMatrix>
where
    F: Fn(&HermitianProjector) -> Result<HermitianProjector>,
{
    let image = map(base)?;
    let wrapped = |xs: &[HermitianProjector]| -> Result<Vec<HermitianProjector>> {
        Ok(vec![map(&xs[0])?])
    };
    let out = pushforward_projector_tuple(
        &wrapped,
        std::slice::from_ref(base),
        std::slice::from_ref(tangent),
        std::slice::from_ref(&image),
        h,
    )?;
    Ok(out.into_iter().next().unwrap())
}

/// Single-slot convenience wrapper: finite-difference tangent of a
/// projective map.
pub fn pushforward_point<F>(
    map: F,
    base: &ProjectivePoint,
    tangent: &[C64],
    h: f64,
) -> Result<Vec<C64>>
where
    F: Fn(&ProjectivePoint) -> Result<ProjectivePoint>,
{
    let image = map(base)?;
    let wrapped = |xs: &[ProjectivePoint]| -> Result<Vec<ProjectivePoint>> { Ok(vec![map(&xs[0])?]) };
    let out = pushforward_point_tuple(
        &wrapped,
        std::slice::from_ref(base),
        &[tangent.to_vec()],
        std::slice::from_ref(&image),
        h,
    )?;
    Ok(out.into_iter().next().unwrap())
}

// -------------------------------------------------------------------------
// Symplectomorphism residuals.

/// Residual summary over a trial run: plain step `h` and Richardson `(h, h/2)`.
#[derive(Debug, Clone, Copy, serde::Serialize)]
pub struct SymplectoStats {
    pub max_plain: f64,
    pub max_richardson: f64,
    pub resampled: usize,
}

impl SymplectoStats {
    fn zero() -> Self {
        Self { max_plain: 0.0, max_richardson: 0.0, resampled: 0 }
    }

    fn absorb(&mut self, plain: f64, rich: f64) {
        self.max_plain = self.max_plain.max(plain);
        self.max_richardson = self.max_richardson.max(rich);
    }

    fn from_residuals(residuals: &[(f64, f64)]) -> Self {
        let mut s = Self::zero();
        for &(p, r) in residuals {
            s.absorb(p, r);
        }
        s
    }
}

fn weighted_omega_projectors(
    bases: &[HermitianProjector],
    vs: &[ComplexMatrix],
    ws: &[ComplexMatrix],
    weights: &[f64],
) -> Result<f64> {
    let mut total = 0.0;
    for i in 0..bases.len() {
        total += weights[i] * omega_orbit(&bases[i], &vs[i], &ws[i])?;
    }
    Ok(total)
}

fn weighted_omega_points(
    bases: &[ProjectivePoint],
    vs: &[Vec<C64>],
    ws: &[Vec<C64>],
    weights: &[f64],
) -> Result<f64> {
    let mut total = 0.0;
    for i in 0..bases.len() {
        total += weights[i] * omega_fs(&bases[i], &vs[i], &ws[i])?;
    }
    Ok(total)
}

/// Compare the weighted form at a base tuple with its value at the image on
/// pushforwards; returns `(plain, richardson)` relative residuals.
fn symplecto_residual_projectors<F>(
    map: &F,
    bases: &[HermitianProjector],
    vs: &[ComplexMatrix],
    ws: &[ComplexMatrix],
    weights: &[f64],
    h: f64,
) -> Result<(f64, f64)>
where
    F: Fn(&[HermitianProjector]) -> Result<Vec<HermitianProjector>>,
{
    let base_val = weighted_omega_projectors(bases, vs, ws, weights)?;
    let images = map(bases)?;
    let mut vals = [0.0f64; 2];
    for (slot, step) in [h, h / 2.0].into_iter().enumerate() {
        let dv = pushforward_projector_tuple(map, bases, vs, &images, step)?;
        let dw = pushforward_projector_tuple(map, bases, ws, &images, step)?;
        vals[slot] = weighted_omega_projectors(&images, &dv, &dw, weights)?;
    }
    let scale = 1.0 + base_val.abs();
    let plain = (vals[0] - base_val).abs() / scale;
    let rich = ((4.0 * vals[1] - vals[0]) / 3.0 - base_val).abs() / scale;
    Ok((plain, rich))
}

fn symplecto_residual_points<F>(
    map: &F,
    bases: &[ProjectivePoint],
    vs: &[Vec<C64>],
    ws: &[Vec<C64>],
    weights: &[f64],
    h: f64,
) -> Result<(f64, f64)>
where
    F: Fn(&[ProjectivePoint]) -> Result<Vec<ProjectivePoint>>,
{
    let base_val = weighted_omega_points(bases, vs, ws, weights)?;
    let images = map(bases)?;
    let mut vals = [0.0f64; 2];
    for (slot, step) in [h, h / 2.0].into_iter().enumerate() {
        let dv = pushforward_point_tuple(map, bases, vs, &images, step)?;
        let dw = pushforward_point_tuple(map, bases, ws, &images, step)?;
        vals[slot] = weighted_omega_points(&images, &dv, &dw, weights)?;
    }
    let scale = 1.0 + base_val.abs();
    let plain = (vals[0] - base_val).abs() / scale;
    let rich = ((4.0 * vals[1] - vals[0]) / 3.0 - base_val).abs() / scale;
    Ok((plain, rich))
}

use crate::rng::random_boundary;

/// Identity-map control residuals, one `(plain, richardson)` pair per trial.
pub fn symplecto_identity_residuals(n: usize, k: usize, trials: u64, seed: u64) -> Result<Vec<(f64, f64)>> {
    let map = |xs: &[HermitianProjector]| -> Result<Vec<HermitianProjector>> { Ok(xs.to_vec()) };
    let mut out = Vec::with_capacity(trials as usize);
    for trial in 0..trials {
        let mut rng = rng::stream(seed, trial);
        let p = crate::matrix::random_projector_with(n, k, &mut rng);
        let v = random_projector_tangent(&p, &mut rng);
        let w = random_projector_tangent(&p, &mut rng);
        out.push(symplecto_residual_projectors(&map, &[p], &[v], &[w], &[1.0], tol::FD_STEP)?);
    }
    Ok(out)
}

/// Identity-map control: the residual is pure finite-difference noise.
pub fn check_symplecto_identity(n: usize, k: usize, trials: u64, seed: u64) -> Result<SymplectoStats> {
    Ok(SymplectoStats::from_residuals(&symplecto_identity_residuals(n, k, trials, seed)?))
}

/// Per-trial residuals for the pairwise Yang-Baxter map on
/// `P(n)_k × P(n)_ℓ` with weights `(−2 Im α₁, −2 Im α₂)`.
pub fn symplecto_yb_residuals(
    n: usize,
    k: usize,
    l: usize,
    trials: u64,
    seed: u64,
) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::with_capacity(trials as usize);
    for trial in 0..trials {
        let mut rng = rng::stream(seed, trial);
        let params = rng::random_disjoint_parameters(2, false, &mut rng);
        let p1 = crate::matrix::random_projector_with(n, k, &mut rng);
        let p2 = crate::matrix::random_projector_with(n, l, &mut rng);
        let bases = [p1, p2];
        let vs = [random_projector_tangent(&bases[0], &mut rng), random_projector_tangent(&bases[1], &mut rng)];
        let ws = [random_projector_tangent(&bases[0], &mut rng), random_projector_tangent(&bases[1], &mut rng)];
        let weights = [-2.0 * params[0].value().im, -2.0 * params[1].value().im];
        let map = |xs: &[HermitianProjector]| -> Result<Vec<HermitianProjector>> {
            let out = yb_map(params[0], &xs[0], params[1], &xs[1])?;
            Ok(vec![out.p1_tilde, out.p2_tilde])
        };
        out.push(symplecto_residual_projectors(&map, &bases, &vs, &ws, &weights, tol::FD_STEP)?);
    }
    Ok(out)
}

/// The pairwise Yang-Baxter map on `P(n)_k × P(n)_ℓ`.
pub fn check_symplecto_yb(n: usize, k: usize, l: usize, trials: u64, seed: u64) -> Result<SymplectoStats> {
    Ok(SymplectoStats::from_residuals(&symplecto_yb_residuals(n, k, l, trials, seed)?))
}

/// Per-trial residuals for the reflection map `B(α)` on `P(n)_k` with the
/// orbit form, weight 1.
pub fn symplecto_b_map_residuals(n: usize, k: usize, trials: u64, seed: u64) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::with_capacity(trials as usize);
    for trial in 0..trials {
        let mut rng = rng::stream(seed, trial);
        let alpha = rng::random_disjoint_parameters(1, true, &mut rng)[0];
        let u = random_boundary(n, &mut rng);
        let p = crate::matrix::random_projector_with(n, k, &mut rng);
        let v = random_projector_tangent(&p, &mut rng);
        let w = random_projector_tangent(&p, &mut rng);
        let map = |xs: &[HermitianProjector]| -> Result<Vec<HermitianProjector>> {
            Ok(vec![b_map(alpha, &xs[0], &u)?])
        };
        out.push(symplecto_residual_projectors(&map, &[p], &[v], &[w], &[1.0], tol::FD_STEP)?);
    }
    Ok(out)
}

/// The reflection map `B(α)` on `P(n)_k`.
pub fn check_symplecto_b_map(n: usize, k: usize, trials: u64, seed: u64) -> Result<SymplectoStats> {
    Ok(SymplectoStats::from_residuals(&symplecto_b_map_residuals(n, k, trials, seed)?))
}

/// Per-trial residuals for the projective reflection map with the
/// Fubini-Study form, weight 1.
pub fn symplecto_b_tilde_residuals(n: usize, trials: u64, seed: u64) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::with_capacity(trials as usize);
    for trial in 0..trials {
        let mut rng = rng::stream(seed, trial);
        let alpha = rng::random_disjoint_parameters(1, true, &mut rng)[0];
        let u = random_boundary(n, &mut rng);
        let p = ProjectivePoint::new(rng::random_unit_vector(n, &mut rng))?;
        let v = random_horizontal_tangent(&p, &mut rng);
        let w = random_horizontal_tangent(&p, &mut rng);
        let map = |xs: &[ProjectivePoint]| -> Result<Vec<ProjectivePoint>> {
            Ok(vec![crate::projective::b_tilde(alpha, &xs[0], &u)?])
        };
        out.push(symplecto_residual_points(
            &map,
            std::slice::from_ref(&p),
            std::slice::from_ref(&v),
            std::slice::from_ref(&w),
            &[1.0],
            tol::FD_STEP,
        )?);
    }
    Ok(out)
}

/// The projective reflection map with the Fubini-Study form.
pub fn check_symplecto_b_tilde(n: usize, trials: u64, seed: u64) -> Result<SymplectoStats> {
    Ok(SymplectoStats::from_residuals(&symplecto_b_tilde_residuals(n, trials, seed)?))
}

/// Per-trial residuals for the N-body polarization reflection map with
/// per-soliton weights `−2 Im αᵢ` (the weights `ᾱᵢ − αᵢ` with the constant
/// factor common to all slots dropped).
pub fn symplecto_n_body_residuals(
    n: usize,
    n_solitons: usize,
    trials: u64,
    seed: u64,
) -> Result<Vec<(f64, f64)>> {
    let mut out = Vec::with_capacity(trials as usize);
    for trial in 0..trials {
        let mut rng = rng::stream(seed, trial);
        let ens = PolarizationEnsemble::random(n_solitons, n, seed ^ (trial.wrapping_mul(0x9e37_79b9)))?;
        let bases: Vec<ProjectivePoint> = ens.points().to_vec();
        let vs: Vec<Vec<C64>> = bases.iter().map(|p| random_horizontal_tangent(p, &mut rng)).collect();
        let ws: Vec<Vec<C64>> = bases.iter().map(|p| random_horizontal_tangent(p, &mut rng)).collect();
        let weights: Vec<f64> = ens.params().iter().map(|a| -2.0 * a.value().im).collect();
        let params = ens.params().to_vec();
        let boundary = ens.boundary().clone();
        let map = |xs: &[ProjectivePoint]| -> Result<Vec<ProjectivePoint>> {
            let moved = PolarizationEnsemble::new(params.clone(), xs.to_vec(), boundary.clone())?;
            n_body_reflection(&moved, Schedule::Composite)
        };
        out.push(symplecto_residual_points(&map, &bases, &vs, &ws, &weights, tol::FD_STEP)?);
    }
    Ok(out)
}

/// The N-body polarization reflection map.
pub fn check_symplecto_n_body(n: usize, n_solitons: usize, trials: u64, seed: u64) -> Result<SymplectoStats> {
    Ok(SymplectoStats::from_residuals(&symplecto_n_body_residuals(n, n_solitons, trials, seed)?))
}

/// The reduced Yang-Baxter map on the graph `{(UPU*, P)}` with the restricted
/// form, checked in the parametrization by the second component: there the
/// form pulls back to twice the orbit form and the map becomes
/// `P ↦ U B(α)(P) U*`.
pub fn check_symplecto_reduced_graph(n: usize, k: usize, trials: u64, seed: u64) -> Result<SymplectoStats> {
    let mut stats = SymplectoStats::zero();
    for trial in 0..trials {
        let mut rng = rng::stream(seed, trial);
        let alpha = rng::random_disjoint_parameters(1, true, &mut rng)[0];
        let u = random_boundary(n, &mut rng);
        let p = crate::matrix::random_projector_with(n, k, &mut rng);
        let v = random_projector_tangent(&p, &mut rng);
        let w = random_projector_tangent(&p, &mut rng);
        let map = |xs: &[HermitianProjector]| -> Result<Vec<HermitianProjector>> {
            Ok(vec![u.conjugate_projector(&b_map(alpha, &xs[0], &u)?)])
        };
        let (plain, rich) =
            symplecto_residual_projectors(&map, &[p], &[v], &[w], &[2.0], tol::FD_STEP)?;
        stats.absorb(plain, rich);
    }
    Ok(stats)
}

// -------------------------------------------------------------------------
// Nondegeneracy by tangent-basis brute force.

/// Orbit-form nondegeneracy: for each random unit tangent the best pairing
/// over the tangent basis; returns the minimum over trials.
pub fn orbit_nondegeneracy(n: usize, k: usize, trials: u64, seed: u64) -> Result<f64> {
    let mut min_best = f64::INFINITY;
    for trial in 0..trials {
        let mut rng = rng::stream(seed, trial);
        let p = crate::matrix::random_projector_with(n, k, &mut rng);
        let v = random_projector_tangent(&p, &mut rng);
        let mut best = 0.0f64;
        for w in projector_tangent_basis(&p) {
            best = best.max(omega_orbit(&p, &v, &w)?.abs());
        }
        min_best = min_best.min(best);
    }
    Ok(min_best)
}

/// Nondegeneracy of the graph form on `{(UPU*, P)}`: the form evaluates to
/// twice the orbit form under the graph parametrization, and a symplectic
/// partner must exist in the tangent basis.
pub fn graph_nondegeneracy_projector(n: usize, k: usize, trials: u64, seed: u64) -> Result<f64> {
    let mut min_best = f64::INFINITY;
    for trial in 0..trials {
        let mut rng = rng::stream(seed, trial);
        let p = crate::matrix::random_projector_with(n, k, &mut rng);
        let u = random_boundary(n, &mut rng);
        let v = random_projector_tangent(&p, &mut rng);
        let cu_v = u.matrix().matmul(&v).matmul(&u.matrix().adjoint());
        let cu_p = u.conjugate_projector(&p);
        let mut best = 0.0f64;
        for w in projector_tangent_basis(&p) {
            let cu_w = u.matrix().matmul(&w).matmul(&u.matrix().adjoint());
            let val = omega_orbit(&cu_p, &cu_v, &cu_w)? + omega_orbit(&p, &v, &w)?;
            best = best.max(val.abs());
        }
        min_best = min_best.min(best);
    }
    Ok(min_best)
}

/// Nondegeneracy of the graph form on `{([Up], [p])}` with the Fubini-Study
/// form on both legs.
pub fn graph_nondegeneracy_projective(n: usize, trials: u64, seed: u64) -> Result<f64> {
    let mut min_best = f64::INFINITY;
    for trial in 0..trials {
        let mut rng = rng::stream(seed, trial);
        let p = ProjectivePoint::new(rng::random_unit_vector(n, &mut rng))?;
        let u = random_boundary(n, &mut rng);
        let v = random_horizontal_tangent(&p, &mut rng);
        let up = ProjectivePoint::new(u.apply(p.rep()))?;
        // align the boundary image of the representative with the stored one
        let lifted = u.apply(p.rep());
        let phase = inner(&lifted, up.rep());
        let phase = phase / phase.norm();
        let uv = scale_vec(&u.apply(&v), phase);
        let mut best = 0.0f64;
        for w in horizontal_tangent_basis(&p) {
            let uw = scale_vec(&u.apply(&w), phase);
            let val = omega_fs(&up, &uv, &uw)? + omega_fs(&p, &v, &w)?;
            best = best.max(val.abs());
        }
        min_best = min_best.min(best);
    }
    Ok(min_best)
}
