//! Seeded verification suites and scatter runs. Each suite draws its trial
//! data from per-trial ChaCha streams, counts residuals above tolerance, and
//! reports the maximum; the JSON encoding is deterministic for a fixed
//! `(suite, parameters, seed)` so runs can be diffed byte for byte.

use std::fmt;
use std::time::Instant;

use serde::Serialize;

use crate::error::{Error, Result};
use crate::loop_group::{
    check_loop_reflection_equation, check_loop_ybe, loop_equal_residual, sigma_loop,
    uniqueness_residual, RationalLoopElement,
};
use crate::matrix::{random_projector_with, HermitianProjector, HermitianUnitary};
use crate::projective::{
    b_tilde, check_projective_reflection_equation, j_delta, n_body_reflection,
    n_body_reflection_traced, r_tilde, scattering_relation_residual, CollisionEvent,
    PolarizationEnsemble, ProjectivePoint, Schedule,
};
use crate::reflection::{b_map, check_reflection_equation};
use crate::rng;
use crate::simple::{SimpleElement, SpectralParameter};
use crate::symplectic;
use crate::yang_baxter::{check_ybe, yb_map};

/// Default residual tolerance for the algebraic suites.
pub const DEFAULT_TOL_ALGEBRAIC: f64 = 1e-9;
/// Default residual tolerance for the finite-difference symplectic suite.
pub const DEFAULT_TOL_SYMPLECTIC: f64 = 1e-5;

/// The named verification suites.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SuiteKind {
    Ybe,
    Reflection,
    Involution,
    Symplectic,
    LoopYbe,
    LoopReflection,
    Uniqueness,
    Consistency,
}

impl SuiteKind {
    pub fn parse(name: &str) -> Option<Self> {
        match name {
            "ybe" => Some(Self::Ybe),
            "reflection" => Some(Self::Reflection),
            "involution" => Some(Self::Involution),
            "symplectic" => Some(Self::Symplectic),
            "loop-ybe" => Some(Self::LoopYbe),
            "loop-reflection" => Some(Self::LoopReflection),
            "uniqueness" => Some(Self::Uniqueness),
            "consistency" => Some(Self::Consistency),
            _ => None,
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            Self::Ybe => "ybe",
            Self::Reflection => "reflection",
            Self::Involution => "involution",
            Self::Symplectic => "symplectic",
            Self::LoopYbe => "loop-ybe",
            Self::LoopReflection => "loop-reflection",
            Self::Uniqueness => "uniqueness",
            Self::Consistency => "consistency",
        }
    }

    pub fn all() -> [Self; 8] {
        [
            Self::Ybe,
            Self::Reflection,
            Self::Involution,
            Self::Symplectic,
            Self::LoopYbe,
            Self::LoopReflection,
            Self::Uniqueness,
            Self::Consistency,
        ]
    }

    pub fn default_tol(&self) -> f64 {
        match self {
            Self::Symplectic => DEFAULT_TOL_SYMPLECTIC,
            _ => DEFAULT_TOL_ALGEBRAIC,
        }
    }
}

/// Echo of the suite configuration.
#[derive(Debug, Clone, Copy, Serialize)]
pub struct SuiteParams {
    pub n: usize,
    pub k: Option<usize>,
    pub l: Option<usize>,
    pub trials: u64,
    pub seed: u64,
    pub tol: f64,
}

impl SuiteParams {
    pub fn new(n: usize, trials: u64, seed: u64, tol: f64) -> Self {
        Self { n, k: None, l: None, trials, seed, tol }
    }
}

/// Outcome of a suite run. `elapsed_ms` is kept out of the JSON encoding so
/// that reports with equal seeds are byte-identical.
#[derive(Debug, Clone, Serialize)]
pub struct SuiteReport {
    pub schema: u32,
    pub suite: &'static str,
    pub params: SuiteParams,
    pub trials_run: u64,
    pub failures: u64,
    pub max_residual: f64,
    #[serde(skip)]
    pub elapsed_ms: f64,
}

impl SuiteReport {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("suite report serialization cannot fail")
    }
}

impl fmt::Display for SuiteReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "suite {:<16} n={} k={} l={} trials={} seed={} tol={:.1e}",
            self.suite,
            self.params.n,
            self.params.k.map_or_else(|| "-".into(), |k| k.to_string()),
            self.params.l.map_or_else(|| "-".into(), |l| l.to_string()),
            self.params.trials,
            self.params.seed,
            self.params.tol,
        )?;
        writeln!(
            f,
            "  {}: {}/{} trials within tolerance, max residual {:.3e} ({:.1} ms)",
            if self.passed() { "PASS" } else { "FAIL" },
            self.trials_run - self.failures,
            self.trials_run,
            self.max_residual,
            self.elapsed_ms,
        )
    }
}

fn rank_for(n: usize, preferred: Option<usize>, fallback: usize) -> Result<usize> {
    let k = preferred.unwrap_or(1 + fallback % (n - 1));
    if k == 0 || k >= n {
        return Err(Error::RankError { rank: k, n });
    }
    Ok(k)
}

/// Run one suite and aggregate its per-trial residuals.
pub fn run_suite(kind: SuiteKind, params: SuiteParams) -> Result<SuiteReport> {
    if params.n < 2 {
        return Err(Error::InvalidInput { reason: "n must be at least 2".into() });
    }
    if params.trials == 0 {
        return Err(Error::InvalidInput { reason: "trials must be at least 1".into() });
    }
    let start = Instant::now();
    let residuals: Vec<f64> = match kind {
        SuiteKind::Ybe => suite_ybe(&params)?,
        SuiteKind::Reflection => suite_reflection(&params)?,
        SuiteKind::Involution => suite_involution(&params)?,
        SuiteKind::Symplectic => suite_symplectic(&params)?,
        SuiteKind::LoopYbe => suite_loop_ybe(&params)?,
        SuiteKind::LoopReflection => suite_loop_reflection(&params)?,
        SuiteKind::Uniqueness => suite_uniqueness(&params)?,
        SuiteKind::Consistency => suite_consistency(&params)?,
    };
    // NaN counts as a failure
    let failures = residuals.iter().filter(|&&r| r > params.tol || r.is_nan()).count() as u64;
    let max_residual = residuals.iter().cloned().fold(0.0, f64::max);
    Ok(SuiteReport {
        schema: 1,
        suite: kind.name(),
        params,
        trials_run: residuals.len() as u64,
        failures,
        max_residual,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

fn suite_ybe(p: &SuiteParams) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(p.trials as usize);
    for trial in 0..p.trials {
        let mut rng = rng::stream(p.seed, trial);
        let params = rng::random_disjoint_parameters(3, false, &mut rng);
        let k1 = rank_for(p.n, p.k, trial as usize)?;
        let k2 = rank_for(p.n, p.l, trial as usize / 2)?;
        let k3 = rank_for(p.n, None, trial as usize / 3)?;
        let p1 = random_projector_with(p.n, k1, &mut rng);
        let p2 = random_projector_with(p.n, k2, &mut rng);
        let p3 = random_projector_with(p.n, k3, &mut rng);
        out.push(check_ybe(params[0], params[1], params[2], &p1, &p2, &p3)?);
    }
    Ok(out)
}

fn suite_reflection(p: &SuiteParams) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(p.trials as usize);
    for trial in 0..p.trials {
        let mut rng = rng::stream(p.seed, trial);
        let params = rng::random_disjoint_parameters(2, true, &mut rng);
        let k = rank_for(p.n, p.k, trial as usize)?;
        let l = rank_for(p.n, p.l, trial as usize / 2)?;
        let p1 = random_projector_with(p.n, k, &mut rng);
        let p2 = random_projector_with(p.n, l, &mut rng);
        let u = rng::random_boundary(p.n, &mut rng);
        let projector_level = check_reflection_equation(params[0], params[1], &p1, &p2, &u)?;
        // projective version on fresh rank-1 data
        let q1 = ProjectivePoint::new(rng::random_unit_vector(p.n, &mut rng))?;
        let q2 = ProjectivePoint::new(rng::random_unit_vector(p.n, &mut rng))?;
        let projective_level =
            check_projective_reflection_equation(params[0], params[1], &q1, &q2, &u)?;
        out.push(projector_level.max(projective_level));
    }
    Ok(out)
}

fn suite_involution(p: &SuiteParams) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(p.trials as usize);
    for trial in 0..p.trials {
        let mut rng = rng::stream(p.seed, trial);
        let alpha = rng::random_disjoint_parameters(1, true, &mut rng)[0];
        let u = rng::random_boundary(p.n, &mut rng);
        let k = rank_for(p.n, p.k, trial as usize)?;
        let proj = random_projector_with(p.n, k, &mut rng);
        // B(τ(α)) B(α) = id on the rank-k stratum
        let b_once = b_map(alpha, &proj, &u)?;
        let b_twice = b_map(alpha.tau(), &b_once, &u)?;
        let mut worst = b_twice.distance(&proj);
        // projective counterpart
        let point = ProjectivePoint::new(rng::random_unit_vector(p.n, &mut rng))?;
        let t_once = b_tilde(alpha, &point, &u)?;
        let t_twice = b_tilde(alpha.tau(), &t_once, &u)?;
        worst = worst.max(t_twice.distance(&point));
        // the loop involution on a simple factor
        let g = RationalLoopElement::single(SimpleElement::new(alpha, proj.clone()));
        let back = sigma_loop(&sigma_loop(&g, &u)?, &u)?;
        worst = worst.max(loop_equal_residual(&back, &g)?);
        out.push(worst);
    }
    Ok(out)
}

fn suite_symplectic(p: &SuiteParams) -> Result<Vec<f64>> {
    let k = rank_for(p.n, p.k, 0)?;
    let l = rank_for(p.n, p.l, 1)?;
    let yb = symplectic::symplecto_yb_residuals(p.n, k, l, p.trials, p.seed)?;
    let bm = symplectic::symplecto_b_map_residuals(p.n, k, p.trials, p.seed ^ 0x1)?;
    let bt = symplectic::symplecto_b_tilde_residuals(p.n, p.trials, p.seed ^ 0x2)?;
    let nb = symplectic::symplecto_n_body_residuals(p.n, 2, p.trials, p.seed ^ 0x3)?;
    Ok((0..p.trials as usize)
        .map(|t| yb[t].0.max(bm[t].0).max(bt[t].0).max(nb[t].0))
        .collect())
}

/// Random loop with `count` rank-1 factors over parameters drawn with the
/// requested mirror margin.
fn random_loop_from(
    params: &[SpectralParameter],
    n: usize,
    rng: &mut impl rand::Rng,
) -> RationalLoopElement {
    let factors = params
        .iter()
        .map(|a| SimpleElement::new(*a, random_projector_with(n, 1 + rng.gen_range(0..n - 1), rng)))
        .collect();
    RationalLoopElement::from_factors(factors).expect("factors share a dimension")
}

fn suite_loop_ybe(p: &SuiteParams) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(p.trials as usize);
    for trial in 0..p.trials {
        let mut rng = rng::stream(p.seed, trial);
        let sizes = [1 + (trial as usize % 2), 1, 1 + ((trial as usize / 2) % 2)];
        let all = rng::random_disjoint_parameters(sizes.iter().sum(), false, &mut rng);
        let g1 = random_loop_from(&all[..sizes[0]], p.n, &mut rng);
        let g2 = random_loop_from(&all[sizes[0]..sizes[0] + 1], p.n, &mut rng);
        let g3 = random_loop_from(&all[sizes[0] + 1..], p.n, &mut rng);
        out.push(check_loop_ybe(&g1, &g2, &g3)?);
    }
    Ok(out)
}

fn suite_loop_reflection(p: &SuiteParams) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(p.trials as usize);
    for trial in 0..p.trials {
        let mut rng = rng::stream(p.seed, trial);
        let u = rng::random_boundary(p.n, &mut rng);
        let sizes = [1 + (trial as usize % 2), 1 + ((trial as usize / 2) % 2)];
        let all = rng::random_disjoint_parameters(sizes.iter().sum(), true, &mut rng);
        let g1 = random_loop_from(&all[..sizes[0]], p.n, &mut rng);
        let g2 = random_loop_from(&all[sizes[0]..], p.n, &mut rng);
        out.push(check_loop_reflection_equation(&g1, &g2, &u)?);
    }
    Ok(out)
}

fn suite_uniqueness(p: &SuiteParams) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(p.trials as usize);
    for trial in 0..p.trials {
        let mut rng = rng::stream(p.seed, trial);
        let u = rng::random_boundary(p.n, &mut rng);
        let sizes = [1 + (trial as usize % 2), 1 + ((trial as usize / 2) % 2)];
        let all = rng::random_disjoint_parameters(sizes.iter().sum(), true, &mut rng);
        let g1 = random_loop_from(&all[..sizes[0]], p.n, &mut rng);
        let g2 = random_loop_from(&all[sizes[0]..], p.n, &mut rng);
        out.push(uniqueness_residual(&g1, &g2, &u)?);
    }
    Ok(out)
}

/// Cross-module agreement: the projective maps against their projector-level
/// and loop-level counterparts, schedule independence of the N-body map, and
/// the scattering relation.
fn suite_consistency(p: &SuiteParams) -> Result<Vec<f64>> {
    let mut out = Vec::with_capacity(p.trials as usize);
    for trial in 0..p.trials {
        let mut rng = rng::stream(p.seed, trial);
        let mut worst = 0.0f64;

        // projective Yang-Baxter map vs the projector-level solver
        let params = rng::random_disjoint_parameters(2, true, &mut rng);
        let q1 = ProjectivePoint::new(rng::random_unit_vector(p.n, &mut rng))?;
        let q2 = ProjectivePoint::new(rng::random_unit_vector(p.n, &mut rng))?;
        let (r1, r2) = r_tilde(params[0], params[1], &q1, &q2)?;
        let lifted = yb_map(params[0], &j_delta(&q1), params[1], &j_delta(&q2))?;
        worst = worst.max(j_delta(&r1).distance(&lifted.p1_tilde));
        worst = worst.max(j_delta(&r2).distance(&lifted.p2_tilde));

        // projective reflection map vs the projector-level one
        let u = rng::random_boundary(p.n, &mut rng);
        let refl = b_tilde(params[0], &q1, &u)?;
        let via_projector = b_map(params[0], &j_delta(&q1), &u)?;
        worst = worst.max(j_delta(&refl).distance(&via_projector));

        // N-body map: two schedules and the loop-group oracle
        let n_sol = 1 + (trial as usize % 3);
        let ens = PolarizationEnsemble::random(n_sol, p.n, p.seed ^ trial.wrapping_mul(0x517c_c1b7))?;
        let a = n_body_reflection(&ens, Schedule::Composite)?;
        let b = n_body_reflection(&ens, Schedule::LeftWord)?;
        let projectors: Vec<HermitianProjector> = ens.points().iter().map(j_delta).collect();
        let oracle =
            crate::loop_group::n_body_reflection_loop(ens.params(), &projectors, ens.boundary())?;
        for i in 0..n_sol {
            worst = worst.max(a[i].distance(&b[i]));
            worst = worst.max(j_delta(&a[i]).distance(&oracle[i]));
        }

        // full scattering relation on the mirror embedding
        worst = worst.max(scattering_relation_residual(&ens)?);
        out.push(worst);
    }
    Ok(out)
}

// -------------------------------------------------------------------------
// Scatter runs.

/// Per-soliton slice of a scatter report.
#[derive(Debug, Clone, Serialize)]
pub struct SolitonOutcome {
    pub alpha: [f64; 2],
    pub initial: Vec<[f64; 2]>,
    pub reflected: Vec<[f64; 2]>,
}

/// Full record of an N-body scatter run: the reflected polarizations, the
/// mirror-embedded scattering data, and the consistency residual between the
/// two computation paths.
#[derive(Debug, Clone, Serialize)]
pub struct ScatterReport {
    pub schema: u32,
    pub n: usize,
    pub solitons: Vec<SolitonOutcome>,
    pub boundary: HermitianUnitary,
    /// Parameters of the mirror-embedded full-line system, left to right.
    pub embedding_params: Vec<[f64; 2]>,
    /// Initial polarizations of the embedded system: the mirror images in
    /// reverse order followed by the real solitons.
    pub embedding_initial: Vec<Vec<[f64; 2]>>,
    /// Final polarizations of the embedded system after full scattering.
    pub embedding_final: Vec<Vec<[f64; 2]>>,
    /// Collision schedule of the composite sweep, in execution order.
    pub events: Vec<CollisionEvent>,
    /// Distance between the composite path and the loop-group oracle,
    /// combined with the scattering-relation residual.
    pub consistency_residual: f64,
    #[serde(skip)]
    pub elapsed_ms: f64,
}

fn point_json(p: &ProjectivePoint) -> Vec<[f64; 2]> {
    p.rep().iter().map(|c| [c.re, c.im]).collect()
}

/// Run the N-body reflection on an ensemble, tracing the schedule and
/// cross-checking against the loop-group refactorization.
pub fn run_scatter(ens: &PolarizationEnsemble) -> Result<ScatterReport> {
    let start = Instant::now();
    let mut events = Vec::new();
    let reflected = n_body_reflection_traced(ens, Schedule::Composite, Some(&mut events))?;

    let projectors: Vec<HermitianProjector> = ens.points().iter().map(j_delta).collect();
    let oracle = crate::loop_group::n_body_reflection_loop(ens.params(), &projectors, ens.boundary())?;
    let mut residual = 0.0f64;
    for i in 0..ens.len() {
        residual = residual.max(j_delta(&reflected[i]).distance(&oracle[i]));
    }
    residual = residual.max(scattering_relation_residual(ens)?);

    let mut embedding_params = Vec::with_capacity(2 * ens.len());
    let mut emb_par = Vec::with_capacity(2 * ens.len());
    let mut emb_pts = Vec::with_capacity(2 * ens.len());
    for (a, p) in ens.params().iter().zip(ens.points()).rev() {
        let t = a.tau().value();
        embedding_params.push([t.re, t.im]);
        emb_par.push(a.tau());
        emb_pts.push(ProjectivePoint::new(ens.boundary().apply(p.rep()))?);
    }
    for (a, p) in ens.params().iter().zip(ens.points()) {
        embedding_params.push([a.value().re, a.value().im]);
        emb_par.push(*a);
        emb_pts.push(p.clone());
    }
    let embedding_initial: Vec<Vec<[f64; 2]>> = emb_pts.iter().map(point_json).collect();
    let embedding_final: Vec<Vec<[f64; 2]>> =
        crate::projective::scattering_map(&emb_par, &emb_pts)?.iter().map(point_json).collect();

    let solitons = ens
        .params()
        .iter()
        .zip(ens.points().iter().zip(&reflected))
        .map(|(a, (p, q))| SolitonOutcome {
            alpha: [a.value().re, a.value().im],
            initial: point_json(p),
            reflected: point_json(q),
        })
        .collect();

    Ok(ScatterReport {
        schema: 1,
        n: ens.points()[0].dim(),
        solitons,
        boundary: ens.boundary().clone(),
        embedding_params,
        embedding_initial,
        embedding_final,
        events,
        consistency_residual: residual,
        elapsed_ms: start.elapsed().as_secs_f64() * 1e3,
    })
}

impl ScatterReport {
    pub fn to_json(&self) -> String {
        serde_json::to_string(self).expect("scatter report serialization cannot fail")
    }

    /// Static schedule diagram: one row per collision event, boundary
    /// reflections highlighted.
    pub fn schedule_svg(&self) -> String {
        let row_h = 22;
        let width = 460;
        let height = 40 + row_h * self.events.len().max(1);
        let mut svg = String::new();
        svg.push_str(&format!(
            "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"{width}\" height=\"{height}\" \
             viewBox=\"0 0 {width} {height}\">\n"
        ));
        svg.push_str(
            "<style>text{font-family:monospace;font-size:12px}.b{fill:#b3443c}.r{fill:#2d5d8e}</style>\n",
        );
        svg.push_str(&format!(
            "<text x=\"10\" y=\"20\">collision schedule ({} solitons)</text>\n",
            self.solitons.len()
        ));
        for (i, e) in self.events.iter().enumerate() {
            let y = 40 + row_h * i;
            let class = if e.reflection { "b" } else { "r" };
            let label = if e.reflection {
                format!(
                    "step {:>3}: boundary reflection at α = {:+.3}{:+.3}i",
                    i + 1,
                    e.right[0],
                    e.right[1]
                )
            } else {
                format!(
                    "step {:>3}: collision {:+.3}{:+.3}i × {:+.3}{:+.3}i (slot {})",
                    i + 1,
                    e.left[0],
                    e.left[1],
                    e.right[0],
                    e.right[1],
                    e.position
                )
            };
            svg.push_str(&format!(
                "<circle cx=\"16\" cy=\"{}\" r=\"5\" class=\"{}\"/><text x=\"30\" y=\"{}\">{}</text>\n",
                y - 4,
                class,
                y,
                label
            ));
        }
        svg.push_str("</svg>\n");
        svg
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn params(n: usize, trials: u64, seed: u64, tol: f64) -> SuiteParams {
        SuiteParams::new(n, trials, seed, tol)
    }

    #[test]
    fn suite_names_round_trip() {
        for kind in SuiteKind::all() {
            assert_eq!(SuiteKind::parse(kind.name()), Some(kind));
        }
        assert_eq!(SuiteKind::parse("nope"), None);
    }

    #[test]
    fn algebraic_suites_pass_smoke() {
        for kind in [
            SuiteKind::Ybe,
            SuiteKind::Reflection,
            SuiteKind::Involution,
            SuiteKind::LoopYbe,
            SuiteKind::LoopReflection,
            SuiteKind::Uniqueness,
            SuiteKind::Consistency,
        ] {
            let tol = if matches!(kind, SuiteKind::LoopYbe | SuiteKind::LoopReflection | SuiteKind::Consistency) {
                1e-8
            } else {
                1e-9
            };
            let report = run_suite(kind, params(2, 5, 42, tol)).unwrap();
            assert!(report.passed(), "suite {} failed: {:?}", kind.name(), report);
            assert_eq!(report.trials_run, 5);
        }
    }

    #[test]
    fn symplectic_suite_passes_smoke() {
        let report = run_suite(SuiteKind::Symplectic, params(2, 3, 42, 1e-5)).unwrap();
        assert!(report.passed(), "{:?}", report);
    }

    #[test]
    fn reports_are_deterministic() {
        let a = run_suite(SuiteKind::Ybe, params(3, 4, 11, 1e-9)).unwrap().to_json();
        let b = run_suite(SuiteKind::Ybe, params(3, 4, 11, 1e-9)).unwrap().to_json();
        assert_eq!(a, b);
        assert!(a.starts_with("{\"schema\":1,\"suite\":\"ybe\""));
        assert!(!a.contains("elapsed"));
    }

    #[test]
    fn invalid_suite_params_rejected() {
        assert!(run_suite(SuiteKind::Ybe, params(1, 5, 0, 1e-9)).is_err());
        assert!(run_suite(SuiteKind::Ybe, params(3, 0, 0, 1e-9)).is_err());
        let mut p = params(3, 1, 0, 1e-9);
        p.k = Some(3);
        assert!(run_suite(SuiteKind::Ybe, p).is_err());
    }

    #[test]
    fn scatter_report_structure() {
        let ens = PolarizationEnsemble::random(2, 2, 5).unwrap();
        let report = run_scatter(&ens).unwrap();
        assert_eq!(report.solitons.len(), 2);
        assert_eq!(report.embedding_params.len(), 4);
        assert!(report.consistency_residual <= 1e-8, "residual {}", report.consistency_residual);
        // N² logged events (mirror companion swaps are implicit), N of them
        // boundary reflections
        assert_eq!(report.events.len(), 4);
        assert_eq!(report.events.iter().filter(|e| e.reflection).count(), 2);
        let svg = report.schedule_svg();
        assert!(svg.starts_with("<svg") && svg.contains("boundary reflection"));
        // byte-identical reports for the same ensemble
        assert_eq!(report.to_json(), run_scatter(&ens).unwrap().to_json());
    }
}
