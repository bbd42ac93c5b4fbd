//! Seeded randomness. Every stochastic routine in the crate draws from a
//! ChaCha8 stream addressed by `(seed, stream)`, so results are pure
//! functions of their seeds and reproduce across platforms.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::matrix::{norm, scale_vec, C64};
use crate::simple::SpectralParameter;

/// Independent generator for trial `stream` of the run seeded by `seed`.
pub fn stream(seed: u64, stream: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(stream);
    rng
}

/// Random Hermitian unitary `V I_S V*` with a Haar-like conjugator and a
/// random signature subset.
pub fn random_boundary(n: usize, rng: &mut impl Rng) -> crate::matrix::HermitianUnitary {
    let v = crate::linalg::random_unitary(n, rng);
    let subset: Vec<usize> = (0..n).filter(|_| rng.gen::<bool>()).collect();
    crate::matrix::HermitianUnitary::from_subset(n, &subset, Some(&v))
        .expect("conjugated signature is a Hermitian unitary")
}

pub fn gaussian_complex_vector(n: usize, rng: &mut impl Rng) -> Vec<C64> {
    (0..n)
        .map(|_| {
            let re: f64 = rng.sample(StandardNormal);
            let im: f64 = rng.sample(StandardNormal);
            C64::new(re, im)
        })
        .collect()
}

pub fn random_unit_vector(n: usize, rng: &mut impl Rng) -> Vec<C64> {
    loop {
        let v = gaussian_complex_vector(n, rng);
        let r = norm(&v);
        if r > 1e-6 {
            return scale_vec(&v, C64::new(1.0 / r, 0.0));
        }
    }
}

/// Margin used when *sampling* spectral parameters. Deliberately far above
/// the library's admissibility floor so that every downstream solve stays
/// well conditioned.
pub const SAMPLING_MARGIN: f64 = 0.1;

/// One spectral parameter uniform in the rectangle ring
/// `|Re| ∈ [0.2, 3], |Im| ∈ [0.2, 3]` with random signs.
pub fn random_parameter(rng: &mut impl Rng) -> SpectralParameter {
    let re = (0.2 + 2.8 * rng.gen::<f64>()) * sign(rng);
    let im = (0.2 + 2.8 * rng.gen::<f64>()) * sign(rng);
    SpectralParameter::new(C64::new(re, im)).expect("sampled off both axes")
}

fn sign(rng: &mut impl Rng) -> f64 {
    if rng.gen::<bool>() {
        1.0
    } else {
        -1.0
    }
}

/// Sample `count` parameters whose supports `{α, ᾱ}` are pairwise separated
/// by at least `SAMPLING_MARGIN`. With `mirrored` also separates every
/// support from every mirrored support `{−α, −ᾱ}`, as boundary refactorization
/// requires.
pub fn random_disjoint_parameters(count: usize, mirrored: bool, rng: &mut impl Rng) -> Vec<SpectralParameter> {
    let mut out: Vec<SpectralParameter> = Vec::with_capacity(count);
    'outer: while out.len() < count {
        let cand = random_parameter(rng);
        for p in &out {
            if !separated(&cand, p, mirrored) {
                continue 'outer;
            }
        }
        if mirrored && support_distance(&cand.support(), &mirror(&cand.support())) < SAMPLING_MARGIN {
            continue;
        }
        out.push(cand);
    }
    out
}

fn separated(a: &SpectralParameter, b: &SpectralParameter, mirrored: bool) -> bool {
    let sa = a.support();
    let sb = b.support();
    if support_distance(&sa, &sb) < SAMPLING_MARGIN {
        return false;
    }
    if mirrored && support_distance(&sa, &mirror(&sb)) < SAMPLING_MARGIN {
        return false;
    }
    true
}

fn mirror(s: &[C64; 2]) -> [C64; 2] {
    [-s[0], -s[1]]
}

fn support_distance(a: &[C64; 2], b: &[C64; 2]) -> f64 {
    let mut d = f64::INFINITY;
    for x in a {
        for y in b {
            d = d.min((x - y).norm());
        }
    }
    d
}
