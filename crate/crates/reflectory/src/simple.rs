//! Simple elements (Blaschke-Potapov factors) of the rational loop group:
//! `g_{α,P}(z) = I + ((ᾱ−α)/(z−ᾱ)) P` with a Hermitian projector `P`, a zero
//! at `α` and a pole at `ᾱ`. These factors generate everything the rest of
//! the crate manipulates.

use num_complex::Complex;
use rand::Rng;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};
use crate::matrix::{C64, ComplexMatrix, HermitianProjector, HermitianUnitary};
use crate::tol;

/// Spectral coordinate `α` off the real axis; `τ(α) = −ᾱ` is the mirror
/// parameter. Operations involving the boundary involution additionally
/// require `α` off the imaginary axis, checked per call site.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SpectralParameter {
    value: C64,
}

impl SpectralParameter {
    pub fn new(value: C64) -> Result<Self> {
        if !value.re.is_finite() || !value.im.is_finite() {
            return Err(Error::InvalidInput { reason: "spectral parameter must be finite".into() });
        }
        if value.im.abs() <= tol::EPS_AXIS {
            return Err(Error::AxisError { re: value.re, im: value.im });
        }
        Ok(Self { value })
    }

    pub fn value(&self) -> C64 {
        self.value
    }

    pub fn conj(&self) -> C64 {
        self.value.conj()
    }

    /// The mirror parameter `τ(α) = −ᾱ`.
    pub fn tau(&self) -> Self {
        Self { value: -self.value.conj() }
    }

    /// Support of the associated simple element: `{α, ᾱ}`.
    pub fn support(&self) -> [C64; 2] {
        [self.value, self.value.conj()]
    }

    pub fn off_both_axes(&self) -> bool {
        self.value.re.abs() > tol::EPS_AXIS && self.value.im.abs() > tol::EPS_AXIS
    }

    pub fn require_off_axes(&self) -> Result<()> {
        if self.off_both_axes() {
            Ok(())
        } else {
            Err(Error::AxisError { re: self.value.re, im: self.value.im })
        }
    }
}

/// The factor `g_{α,P}`. Degenerate ranks 0 and `n` are permitted (the factor
/// is then scalar); maps that require a proper rank check it themselves.
#[derive(Debug, Clone, PartialEq)]
pub struct SimpleElement {
    alpha: SpectralParameter,
    projector: HermitianProjector,
}

impl SimpleElement {
    pub fn new(alpha: SpectralParameter, projector: HermitianProjector) -> Self {
        Self { alpha, projector }
    }

    pub fn alpha(&self) -> SpectralParameter {
        self.alpha
    }

    pub fn projector(&self) -> &HermitianProjector {
        &self.projector
    }

    pub fn dim(&self) -> usize {
        self.projector.dim()
    }

    /// Distance from `z` to the pole `ᾱ`.
    pub fn pole_distance(&self, z: C64) -> f64 {
        (z - self.alpha.conj()).norm()
    }
}

/// Evaluate `g(z) = I + ((ᾱ−α)/(z−ᾱ)) P`.
pub fn eval_simple(g: &SimpleElement, z: C64) -> Result<ComplexMatrix> {
    let dist = g.pole_distance(z);
    if dist <= tol::EPS_POLE {
        return Err(Error::PoleError { dist });
    }
    let alpha = g.alpha.value();
    let coeff = (alpha.conj() - alpha) / (z - alpha.conj());
    Ok(ComplexMatrix::identity(g.dim()).add(&g.projector.matrix().scale(coeff)))
}

/// The inverse factor: pole and zero trade places, projector unchanged,
/// i.e. `g_{α,P}⁻¹ = g_{ᾱ,P}` so that `g⁻¹(z) = I + ((α−ᾱ)/(z−α)) P`.
pub fn invert_simple(g: &SimpleElement) -> SimpleElement {
    SimpleElement {
        alpha: SpectralParameter { value: g.alpha.conj() },
        projector: g.projector.clone(),
    }
}

/// The boundary involution on factors: `σ(g_{α,P}) = g_{−ᾱ, UPU*}`,
/// pointwise `U g(−z̄)* U*`.
pub fn sigma_simple(g: &SimpleElement, u: &HermitianUnitary) -> Result<SimpleElement> {
    g.alpha.require_off_axes()?;
    Ok(SimpleElement {
        alpha: g.alpha.tau(),
        projector: u.conjugate_projector(&g.projector),
    })
}

pub fn support_simple(g: &SimpleElement) -> [C64; 2] {
    g.alpha.support()
}

/// Minimum distance between two point sets.
pub fn set_distance(a: &[C64], b: &[C64]) -> f64 {
    let mut d = f64::INFINITY;
    for x in a {
        for y in b {
            d = d.min((x - y).norm());
        }
    }
    d
}

/// Support disjointness with the crate-wide margin.
pub fn supports_disjoint(a: &[C64], b: &[C64]) -> bool {
    set_distance(a, b) > tol::EPS_SEP
}

/// Deterministic sample points in the box `[−4,4]²`, each at distance at
/// least `SAMPLE_MARGIN` from every listed pole. Used whenever two rational
/// loops are compared pointwise.
pub fn sample_points_avoiding(poles: &[C64], count: usize) -> Vec<C64> {
    let mut rng = crate::rng::stream(tol::SAMPLE_SEED, 0);
    let mut out = Vec::with_capacity(count);
    while out.len() < count {
        let z = Complex::new(8.0 * rng.gen::<f64>() - 4.0, 8.0 * rng.gen::<f64>() - 4.0);
        if poles.iter().all(|p| (z - p).norm() >= tol::SAMPLE_MARGIN) {
            out.push(z);
        }
    }
    out
}

// SimpleElement JSON: {"alpha":[re,im],"projector":<matrix JSON>}.
#[derive(Serialize, Deserialize)]
struct SimpleElementJson {
    alpha: [f64; 2],
    projector: HermitianProjector,
}

impl Serialize for SimpleElement {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        SimpleElementJson {
            alpha: [self.alpha.value().re, self.alpha.value().im],
            projector: self.projector.clone(),
        }
        .serialize(s)
    }
}

impl<'de> Deserialize<'de> for SimpleElement {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let raw = SimpleElementJson::deserialize(d)?;
        let alpha = SpectralParameter::new(C64::new(raw.alpha[0], raw.alpha[1]))
            .map_err(serde::de::Error::custom)?;
        Ok(SimpleElement::new(alpha, raw.projector))
    }
}
