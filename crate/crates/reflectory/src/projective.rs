//! The rank-1 picture on CP^{n−1}: points and their rank-1 projectors, the
//! projective Yang-Baxter map, the projective reflection map, the N-body
//! polarization reflection map, and the full polarization scattering map.
//!
//! N-body maps are computed by sorting a word of `(parameter, polarization)`
//! factors with adjacent pairwise collisions; the Yang-Baxter property makes
//! the result independent of the collision schedule, which the verification
//! suites exploit as a consistency check.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix::{
    basis_vector, inner, norm, outer, scale_vec, C64, ComplexMatrix, HermitianProjector,
    HermitianUnitary,
};
use crate::simple::{set_distance, SpectralParameter};
use crate::tol;

/// A point of CP^{n−1} stored as a unit representative with a fixed phase:
/// the first component of largest modulus is real nonnegative.
#[derive(Debug, Clone, PartialEq)]
pub struct ProjectivePoint {
    rep: Vec<C64>,
}

impl ProjectivePoint {
    pub fn new(v: Vec<C64>) -> Result<Self> {
        if v.iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
            return Err(Error::InvalidInput { reason: "projective representative must be finite".into() });
        }
        let r = norm(&v);
        if r < 1e-12 {
            return Err(Error::DegenerateImage { norm: r });
        }
        let unit = scale_vec(&v, C64::new(1.0 / r, 0.0));
        // phase convention
        let mut lead = 0usize;
        for (i, c) in unit.iter().enumerate() {
            if c.norm() > unit[lead].norm() + 1e-15 {
                lead = i;
            }
        }
        let phase = unit[lead];
        let rep = if phase.norm() > 0.0 {
            scale_vec(&unit, phase.conj() / phase.norm())
        } else {
            unit
        };
        Ok(Self { rep })
    }

    pub fn basis(n: usize, i: usize) -> Self {
        Self { rep: basis_vector(n, i) }
    }

    pub fn rep(&self) -> &[C64] {
        &self.rep
    }

    pub fn dim(&self) -> usize {
        self.rep.len()
    }

    /// Fubini-Study sine distance `√(1 − |⟨p,q⟩|²)`; phase invariant.
    ///
    /// Evaluated as `‖p − q·e^{iθ}‖ √((1+|c|)/2)` with the phase chosen to
    /// make `⟨p, q e^{iθ}⟩ = |c|`, which avoids the cancellation of
    /// `1 − |c|²` for nearly equal classes.
    pub fn distance(&self, other: &Self) -> f64 {
        let c = inner(&self.rep, &other.rep);
        let mag = c.norm().min(1.0);
        if mag < 1e-15 {
            return 1.0;
        }
        let aligned = scale_vec(&other.rep, c.conj() / c.norm());
        let diff = crate::matrix::sub_vec(&self.rep, &aligned);
        let one_minus = norm(&diff).powi(2) / 2.0;
        (one_minus * (1.0 + mag)).sqrt().min(1.0)
    }

    /// Image under a matrix, renormalized; errors when the image collapses.
    pub fn apply(&self, m: &ComplexMatrix) -> Result<Self> {
        let v = m.matvec(&self.rep);
        let r = norm(&v);
        if r < 1e-9 {
            return Err(Error::DegenerateImage { norm: r });
        }
        Self::new(v)
    }
}

/// The rank-1 projector `π_{[p]} = p p* / p*p`.
pub fn j_delta(p: &ProjectivePoint) -> HermitianProjector {
    let m = outer(p.rep(), p.rep());
    HermitianProjector::from_matrix(m.hermitian_part()).expect("unit outer product is a projector")
}

/// Inverse of `j_delta` on rank-1 projectors: the projective class of the
/// image. Columns of a rank-1 projector are all proportional to the spanning
/// vector, so the largest column serves as representative.
pub fn principal_vector(p: &HermitianProjector) -> Result<ProjectivePoint> {
    if p.rank() != 1 {
        return Err(Error::RankError { rank: p.rank(), n: p.dim() });
    }
    let m = p.matrix();
    let mut best = 0usize;
    let mut best_norm = 0.0;
    for j in 0..p.dim() {
        let c = norm(&m.column(j));
        if c > best_norm {
            best_norm = c;
            best = j;
        }
    }
    ProjectivePoint::new(m.column(best))
}

/// The linear factor `φ_α([p₁],[p₂]) = (α₂−ᾱ₁)I + (ᾱ₂−α₂)π₂ + (ᾱ₁−α₁)π₁`.
fn phi_alpha(
    alpha1: SpectralParameter,
    alpha2: SpectralParameter,
    p1: &ProjectivePoint,
    p2: &ProjectivePoint,
) -> ComplexMatrix {
    let a1 = alpha1.value();
    let a2 = alpha2.value();
    ComplexMatrix::identity(p1.dim())
        .scale(a2 - a1.conj())
        .add(&j_delta(p2).matrix().scale(a2.conj() - a2))
        .add(&j_delta(p1).matrix().scale(a1.conj() - a1))
}

fn require_disjoint(a1: &SpectralParameter, a2: &SpectralParameter) -> Result<()> {
    if set_distance(&a1.support(), &a2.support()) <= tol::EPS_SEP {
        return Err(Error::SupportCollision { a: a1.value(), b: a2.value() });
    }
    Ok(())
}

/// The projective Yang-Baxter map
/// `R̃(α₁,α₂)([p₁],[p₂]) = ([φ_α p₁], [φ_α p₂])`.
pub fn r_tilde(
    alpha1: SpectralParameter,
    alpha2: SpectralParameter,
    p1: &ProjectivePoint,
    p2: &ProjectivePoint,
) -> Result<(ProjectivePoint, ProjectivePoint)> {
    assert_eq!(p1.dim(), p2.dim(), "point dimensions must agree");
    require_disjoint(&alpha1, &alpha2)?;
    let phi = phi_alpha(alpha1, alpha2, p1, p2);
    Ok((p1.apply(&phi)?, p2.apply(&phi)?))
}

/// The projective reflection map
/// `B̃(α)([p]) = [(I + ((ᾱ−α)/(α+ᾱ)) π_{[p]}) U p]`; the parameter flips to
/// `τ(α)`, tracked by the caller.
pub fn b_tilde(
    alpha: SpectralParameter,
    p: &ProjectivePoint,
    u: &HermitianUnitary,
) -> Result<ProjectivePoint> {
    alpha.require_off_axes()?;
    assert_eq!(p.dim(), u.dim(), "point and boundary dimensions must agree");
    let a = alpha.value();
    let coeff = (a.conj() - a) / (a + a.conj());
    let m = ComplexMatrix::identity(p.dim()).add(&j_delta(p).matrix().scale(coeff));
    ProjectivePoint::new(m.matvec(&u.apply(p.rep())))
}

// -------------------------------------------------------------------------
// Ensembles and N-body maps.

/// `N` solitons with spectral parameters, polarizations, and the boundary
/// matrix. Admissibility requires every pair among the `2N` parameters
/// `{αᵢ} ∪ {τ(αᵢ)}` to have separated supports.
#[derive(Debug, Clone)]
pub struct PolarizationEnsemble {
    params: Vec<SpectralParameter>,
    points: Vec<ProjectivePoint>,
    boundary: HermitianUnitary,
}

impl PolarizationEnsemble {
    pub fn new(
        params: Vec<SpectralParameter>,
        points: Vec<ProjectivePoint>,
        boundary: HermitianUnitary,
    ) -> Result<Self> {
        if params.is_empty() || params.len() != points.len() {
            return Err(Error::InvalidInput {
                reason: "ensemble needs one polarization per spectral parameter".into(),
            });
        }
        let n = boundary.dim();
        if points.iter().any(|p| p.dim() != n) {
            return Err(Error::InvalidInput { reason: "polarization dimension mismatch".into() });
        }
        let full: Vec<SpectralParameter> = params.iter().flat_map(|a| [*a, a.tau()]).collect();
        for (i, a) in full.iter().enumerate() {
            a.require_off_axes().map_err(|_| Error::AdmissibilityError {
                reason: format!("parameter {} lies too close to an axis", a.value()),
            })?;
            for b in full.iter().skip(i + 1) {
                if set_distance(&a.support(), &b.support()) <= tol::EPS_SEP {
                    return Err(Error::AdmissibilityError {
                        reason: format!("supports of {} and {} collide", a.value(), b.value()),
                    });
                }
            }
        }
        Ok(Self { params, points, boundary })
    }

    /// Seeded random admissible ensemble of `n_solitons` solitons in CP^{n−1}
    /// with a random conjugated-signature boundary.
    pub fn random(n_solitons: usize, n: usize, seed: u64) -> Result<Self> {
        let mut rng = crate::rng::stream(seed, 0);
        let params = crate::rng::random_disjoint_parameters(n_solitons, true, &mut rng);
        let points = (0..n_solitons)
            .map(|_| ProjectivePoint::new(crate::rng::random_unit_vector(n, &mut rng)))
            .collect::<Result<Vec<_>>>()?;
        let boundary = crate::rng::random_boundary(n, &mut rng);
        Self::new(params, points, boundary)
    }

    pub fn len(&self) -> usize {
        self.params.len()
    }

    pub fn is_empty(&self) -> bool {
        self.params.is_empty()
    }

    pub fn params(&self) -> &[SpectralParameter] {
        &self.params
    }

    pub fn points(&self) -> &[ProjectivePoint] {
        &self.points
    }

    pub fn boundary(&self) -> &HermitianUnitary {
        &self.boundary
    }

    /// Restrict to a subset of soliton indices (zero-based, order kept).
    pub fn subset(&self, indices: &[usize]) -> Result<Self> {
        let mut params = Vec::new();
        let mut points = Vec::new();
        for &i in indices {
            if i >= self.len() {
                return Err(Error::InvalidInput { reason: format!("soliton index {} out of range", i) });
            }
            params.push(self.params[i]);
            points.push(self.points[i].clone());
        }
        Self::new(params, points, self.boundary.clone())
    }
}

// Ensemble JSON:
// {"boundary":<matrix>,"solitons":[{"alpha":[re,im],"polarization":[[re,im],...]},...]}
#[derive(Serialize, Deserialize)]
struct SolitonJson {
    alpha: [f64; 2],
    polarization: Vec<[f64; 2]>,
}

#[derive(Serialize, Deserialize)]
struct EnsembleJson {
    boundary: HermitianUnitary,
    solitons: Vec<SolitonJson>,
}

impl Serialize for PolarizationEnsemble {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        EnsembleJson {
            boundary: self.boundary.clone(),
            solitons: self
                .params
                .iter()
                .zip(&self.points)
                .map(|(a, p)| SolitonJson {
                    alpha: [a.value().re, a.value().im],
                    polarization: p.rep().iter().map(|c| [c.re, c.im]).collect(),
                })
                .collect(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for PolarizationEnsemble {
    fn deserialize<D: serde::Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        use serde::de::Error as _;
        let raw = EnsembleJson::deserialize(d)?;
        let mut params = Vec::new();
        let mut points = Vec::new();
        for s in raw.solitons {
            let alpha = SpectralParameter::new(C64::new(s.alpha[0], s.alpha[1]))
                .map_err(D::Error::custom)?;
            let rep: Vec<C64> = s.polarization.iter().map(|&[re, im]| C64::new(re, im)).collect();
            params.push(alpha);
            points.push(ProjectivePoint::new(rep).map_err(D::Error::custom)?);
        }
        PolarizationEnsemble::new(params, points, raw.boundary).map_err(D::Error::custom)
    }
}

/// Collision schedules for the N-body maps. All admissible schedules produce
/// the same map; they differ only in the order of pairwise collisions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Schedule {
    /// Mirror-symmetric sweep: each soliton in turn crosses the mirrors ahead
    /// of it, reflects off the boundary, then crosses the reflected solitons.
    /// Reflections use the explicit projective reflection map.
    Composite,
    /// Reduced word that bubbles the leading factor rightward first.
    LeftWord,
    /// Reduced word that bubbles the trailing factor leftward first
    /// (fastest-overtakes order).
    RightWord,
}

/// One factor of the scattering word.
#[derive(Debug, Clone)]
struct Factor {
    param: SpectralParameter,
    point: ProjectivePoint,
}

/// A collision event, recorded for reporting and schedule diagrams.
#[derive(Debug, Clone, Serialize)]
pub struct CollisionEvent {
    /// Position of the adjacent swap in the factor word.
    pub position: usize,
    /// Parameters of the colliding factors, left then right.
    pub left: [f64; 2],
    pub right: [f64; 2],
    /// True for boundary reflection events.
    pub reflection: bool,
}

/// Generic adjacent collision: refactor `g_{a,πx} g_{b,πy} = g_{b,πy'} g_{a,πx'}`.
fn swap_factors(word: &mut [Factor], s: usize) -> Result<CollisionEvent> {
    let (a, b) = (word[s].param, word[s + 1].param);
    let (x, y) = (word[s].point.clone(), word[s + 1].point.clone());
    let (x_new, y_new) = r_tilde(a, b, &x, &y)?;
    word[s] = Factor { param: b, point: y_new };
    word[s + 1] = Factor { param: a, point: x_new };
    Ok(CollisionEvent {
        position: s,
        left: [a.value().re, a.value().im],
        right: [b.value().re, b.value().im],
        reflection: false,
    })
}

/// Reduced words for the full reversal of `m` factors.
fn reversal_word(m: usize, schedule: Schedule) -> Vec<usize> {
    let mut word = Vec::with_capacity(m * (m.saturating_sub(1)) / 2);
    match schedule {
        Schedule::LeftWord => {
            for pass in 0..m.saturating_sub(1) {
                for s in 0..(m - 1 - pass) {
                    word.push(s);
                }
            }
        }
        Schedule::RightWord => {
            for pass in 0..m.saturating_sub(1) {
                for s in (pass..(m - 1)).rev() {
                    word.push(s);
                }
            }
        }
        Schedule::Composite => unreachable!("composite schedule is driven separately"),
    }
    word
}

/// Sort the factor word into its reversal with generic collisions.
fn reverse_word_generic(
    mut word: Vec<Factor>,
    schedule: Schedule,
    events: &mut Vec<CollisionEvent>,
) -> Result<Vec<Factor>> {
    let m = word.len();
    for s in reversal_word(m, schedule) {
        events.push(swap_factors(&mut word, s)?);
    }
    Ok(word)
}

/// The full polarization scattering map: `([p₁⁻],…,[p_M⁻]) ↦ ([p₁⁺],…,[p_M⁺])`
/// with slot `i` keeping parameter `αᵢ`; the factor word is reversed by
/// pairwise collisions, fastest-overtakes order by default.
pub fn scattering_map(
    params: &[SpectralParameter],
    points: &[ProjectivePoint],
) -> Result<Vec<ProjectivePoint>> {
    scattering_map_with(params, points, Schedule::RightWord)
}

pub fn scattering_map_with(
    params: &[SpectralParameter],
    points: &[ProjectivePoint],
    schedule: Schedule,
) -> Result<Vec<ProjectivePoint>> {
    if params.len() != points.len() {
        return Err(Error::InvalidInput { reason: "one polarization per parameter".into() });
    }
    for (i, a) in params.iter().enumerate() {
        for b in params.iter().skip(i + 1) {
            require_disjoint(a, b)?;
        }
    }
    // The composite schedule needs the mirror structure, which a plain
    // scattering word does not have; any reduced word gives the same map.
    let schedule = if schedule == Schedule::Composite { Schedule::RightWord } else { schedule };
    let word: Vec<Factor> = params
        .iter()
        .zip(points)
        .map(|(a, p)| Factor { param: *a, point: p.clone() })
        .collect();
    let mut events = Vec::new();
    let sorted = reverse_word_generic(word, schedule, &mut events)?;
    // slot i of the output carries the final projector attached to αᵢ, which
    // after reversal sits at the mirrored position.
    let m = params.len();
    Ok((0..m).map(|i| sorted[m - 1 - i].point.clone()).collect())
}

/// The N-body polarization reflection map `Π(α₁,…,α_N)`: every soliton
/// crosses all mirror solitons (reflecting off the boundary at its own) and
/// the output is the boundary image of the reflected polarizations.
pub fn n_body_reflection(ens: &PolarizationEnsemble, schedule: Schedule) -> Result<Vec<ProjectivePoint>> {
    n_body_reflection_traced(ens, schedule, None)
}

/// As [`n_body_reflection`], recording the collision events when asked.
pub fn n_body_reflection_traced(
    ens: &PolarizationEnsemble,
    schedule: Schedule,
    events: Option<&mut Vec<CollisionEvent>>,
) -> Result<Vec<ProjectivePoint>> {
    let n_sol = ens.len();
    let u = ens.boundary();
    // Initial word: mirrors in reverse order, then the real solitons.
    let mut word: Vec<Factor> = Vec::with_capacity(2 * n_sol);
    for i in (0..n_sol).rev() {
        word.push(sigma_factor(&Factor { param: ens.params[i], point: ens.points[i].clone() }, u)?);
    }
    for i in 0..n_sol {
        word.push(Factor { param: ens.params[i], point: ens.points[i].clone() });
    }

    let mut scratch = Vec::new();
    let sink = events.unwrap_or(&mut scratch);
    let sorted = match schedule {
        Schedule::Composite => composite_reversal(word, u, sink)?,
        other => reverse_word_generic(word, other, sink)?,
    };

    // Final word: (α_N,…,α₁,τ(α₁),…,τ(α_N)); soliton i's reflected
    // polarization is attached to αᵢ and the map returns its boundary image.
    let mut out = Vec::with_capacity(n_sol);
    for i in 0..n_sol {
        let factor = &sorted[n_sol - 1 - i];
        debug_assert!((factor.param.value() - ens.params[i].value()).norm() < 1e-12);
        out.push(ProjectivePoint::new(u.apply(factor.point.rep()))?);
    }
    Ok(out)
}

fn sigma_factor(f: &Factor, u: &HermitianUnitary) -> Result<Factor> {
    f.param.require_off_axes()?;
    Ok(Factor { param: f.param.tau(), point: ProjectivePoint::new(u.apply(f.point.rep()))? })
}

/// Mirror-symmetric sweep. The word stays invariant under (reverse, apply σ),
/// so companion swaps are σ-images of their partners and the central
/// collisions are genuine boundary reflections.
fn composite_reversal(
    mut word: Vec<Factor>,
    u: &HermitianUnitary,
    events: &mut Vec<CollisionEvent>,
) -> Result<Vec<Factor>> {
    let m = word.len();
    let n_sol = m / 2;
    for i in 1..=n_sol {
        // cross the mirrors between soliton i and the boundary
        if i >= 2 {
            for s in (n_sol..=(n_sol + i - 2)).rev() {
                events.push(mirrored_swap(&mut word, s, u)?);
            }
        }
        // boundary reflection at the center
        let c = n_sol - 1;
        let alpha = word[c + 1].param;
        let reflected = b_tilde(alpha, &word[c + 1].point, u)?;
        events.push(CollisionEvent {
            position: c,
            left: [word[c].param.value().re, word[c].param.value().im],
            right: [alpha.value().re, alpha.value().im],
            reflection: true,
        });
        word[c] = Factor { param: alpha, point: ProjectivePoint::new(u.apply(reflected.rep()))? };
        word[c + 1] = Factor { param: alpha.tau(), point: reflected };
        // cross the already-reflected solitons
        if i >= 2 {
            for s in ((n_sol - i)..=(n_sol - 2)).rev() {
                events.push(mirrored_swap(&mut word, s, u)?);
            }
        }
    }
    Ok(word)
}

/// Swap at `s` plus the σ-image companion swap at the mirrored position.
fn mirrored_swap(word: &mut [Factor], s: usize, u: &HermitianUnitary) -> Result<CollisionEvent> {
    let event = swap_factors(word, s)?;
    let m = word.len();
    let t = m - 2 - s;
    if t != s {
        word[t] = sigma_factor(&word[s + 1], u)?;
        word[t + 1] = sigma_factor(&word[s], u)?;
    }
    Ok(event)
}

/// Residual of the relation between the scattering map on the mirror
/// embedding and the N-body reflection map: scatter
/// `([Up_N],…,[Up₁],[p₁],…,[p_N])`, read the right half, and compare its
/// boundary image with `Π`.
pub fn scattering_relation_residual(ens: &PolarizationEnsemble) -> Result<f64> {
    let n_sol = ens.len();
    let u = ens.boundary();
    let pi_out = n_body_reflection(ens, Schedule::Composite)?;

    let mut params = Vec::with_capacity(2 * n_sol);
    let mut points = Vec::with_capacity(2 * n_sol);
    for i in (0..n_sol).rev() {
        params.push(ens.params[i].tau());
        points.push(ProjectivePoint::new(u.apply(ens.points[i].rep()))?);
    }
    for i in 0..n_sol {
        params.push(ens.params[i]);
        points.push(ens.points[i].clone());
    }
    let out = scattering_map(&params, &points)?;
    let mut worst = 0.0f64;
    for i in 0..n_sol {
        let lifted = ProjectivePoint::new(u.apply(out[n_sol + i].rep()))?;
        worst = worst.max(lifted.distance(&pi_out[i]));
        // the left half must be the mirror image of the right half
        let mirror = ProjectivePoint::new(u.apply(out[n_sol - 1 - i].rep()))?;
        worst = worst.max(mirror.distance(&out[n_sol + i]));
    }
    Ok(worst)
}

/// Residual of the projective parametric reflection equation
/// `B̃₁(α₁)R̃₂₁(τ(α₂),α₁)B̃₂(α₂)R̃₁₂(α₁,α₂) =
///  R̃₂₁(τ(α₂),τ(α₁))B̃₂(α₂)R̃₁₂(τ(α₁),α₂)B̃₁(α₁)`.
pub fn check_projective_reflection_equation(
    alpha1: SpectralParameter,
    alpha2: SpectralParameter,
    p1: &ProjectivePoint,
    p2: &ProjectivePoint,
    u: &HermitianUnitary,
) -> Result<f64> {
    alpha1.require_off_axes()?;
    alpha2.require_off_axes()?;
    // left side: R̃₁₂(α₁,α₂), B̃₂, R̃₂₁(τ(α₂),α₁), B̃₁
    let (x1, x2) = r_tilde(alpha1, alpha2, p1, p2)?;
    let x2 = b_tilde(alpha2, &x2, u)?;
    let (x2, x1) = r_tilde(alpha2.tau(), alpha1, &x2, &x1)?;
    let x1 = b_tilde(alpha1, &x1, u)?;
    // right side: B̃₁, R̃₁₂(τ(α₁),α₂), B̃₂, R̃₂₁(τ(α₂),τ(α₁))
    let y1 = b_tilde(alpha1, p1, u)?;
    let (y1, y2) = r_tilde(alpha1.tau(), alpha2, &y1, p2)?;
    let y2 = b_tilde(alpha2, &y2, u)?;
    let (y2, y1) = r_tilde(alpha2.tau(), alpha1.tau(), &y2, &y1)?;
    Ok(x1.distance(&y1).max(x2.distance(&y2)))
}
