//! Hyperbolic geometry of the open unit disc.
//!
//! Disc automorphisms `L_c(z) = e^{iγ}(z + c)/(1 + c̄z)`, the pseudo-hyperbolic
//! distance, pseudo-hyperbolic discs as Euclidean discs, and circular arcs
//! orthogonal to the unit circle.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Tolerance for algebraic identities.
pub const ALGEBRAIC_TOL: f64 = 1e-12;
/// Tolerance for sampled geometric checks.
pub const GEOMETRIC_TOL: f64 = 1e-10;

/// Maps an angle to its representative in `[-π, π)`.
pub fn canonical_angle(theta: f64) -> f64 {
    let r = (theta + PI).rem_euclid(2.0 * PI) - PI;
    if r >= PI {
        -PI
    } else {
        r
    }
}

/// A point of the open unit disc.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "[f64; 2]", into = "[f64; 2]")]
pub struct DiscPoint(Complex64);

impl DiscPoint {
    pub const ORIGIN: DiscPoint = DiscPoint(Complex64 { re: 0.0, im: 0.0 });

    pub fn new(re: f64, im: f64) -> Result<Self> {
        Self::from_complex(Complex64::new(re, im))
    }

    pub fn from_complex(z: Complex64) -> Result<Self> {
        if !(z.re.is_finite() && z.im.is_finite()) {
            return Err(Error::Domain(format!("non-finite disc point {z}")));
        }
        if z.norm_sqr() >= 1.0 {
            return Err(Error::Domain(format!(
                "point {z} is not inside the open unit disc"
            )));
        }
        Ok(DiscPoint(z))
    }

    pub fn from_polar(r: f64, theta: f64) -> Result<Self> {
        Self::from_complex(Complex64::from_polar(r, theta))
    }

    /// Real point on the diameter; panics outside `(-1, 1)`.
    pub fn real(x: f64) -> Self {
        Self::new(x, 0.0).expect("real disc point must lie in (-1, 1)")
    }

    pub fn re(&self) -> f64 {
        self.0.re
    }

    pub fn im(&self) -> f64 {
        self.0.im
    }

    pub fn z(&self) -> Complex64 {
        self.0
    }

    pub fn norm(&self) -> f64 {
        self.0.norm()
    }

    pub fn arg(&self) -> f64 {
        self.0.arg()
    }
}

impl TryFrom<[f64; 2]> for DiscPoint {
    type Error = Error;

    fn try_from(v: [f64; 2]) -> Result<Self> {
        DiscPoint::new(v[0], v[1])
    }
}

impl From<DiscPoint> for [f64; 2] {
    fn from(p: DiscPoint) -> Self {
        [p.0.re, p.0.im]
    }
}

impl From<DiscPoint> for Complex64 {
    fn from(p: DiscPoint) -> Self {
        p.0
    }
}

/// A point `e^{iθ}` of the unit circle, stored by its angle in `[-π, π)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(from = "f64", into = "f64")]
pub struct CirclePoint {
    theta: f64,
}

impl CirclePoint {
    pub fn new(theta: f64) -> Self {
        CirclePoint {
            theta: canonical_angle(theta),
        }
    }

    pub fn theta(&self) -> f64 {
        self.theta
    }

    pub fn z(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.theta)
    }
}

impl From<f64> for CirclePoint {
    fn from(theta: f64) -> Self {
        CirclePoint::new(theta)
    }
}

impl From<CirclePoint> for f64 {
    fn from(p: CirclePoint) -> Self {
        p.theta
    }
}

/// The disc automorphism `ζ ↦ e^{i·rotation}(ζ + c)/(1 + c̄ζ)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MobiusAut {
    pub c: DiscPoint,
    #[serde(default)]
    pub rotation: f64,
}

impl MobiusAut {
    pub fn new(c: DiscPoint) -> Self {
        MobiusAut { c, rotation: 0.0 }
    }

    pub fn with_rotation(c: DiscPoint, rotation: f64) -> Self {
        MobiusAut {
            c,
            rotation: canonical_angle(rotation),
        }
    }

    fn check_closed_disc(z: Complex64) -> Result<()> {
        if !(z.re.is_finite() && z.im.is_finite()) || z.norm() > 1.0 + ALGEBRAIC_TOL {
            return Err(Error::Domain(format!(
                "point {z} is outside the closed unit disc"
            )));
        }
        Ok(())
    }

    /// Applies the map to any point of the closed disc.
    pub fn apply(&self, z: Complex64) -> Result<Complex64> {
        Self::check_closed_disc(z)?;
        let c = self.c.z();
        let den = Complex64::new(1.0, 0.0) + c.conj() * z;
        if den.norm() < ALGEBRAIC_TOL {
            return Err(Error::Domain(format!(
                "denominator 1 + c̄z vanishes at z = {z}"
            )));
        }
        Ok(Complex64::from_polar(1.0, self.rotation) * (z + c) / den)
    }

    /// Applies the inverse map `z ↦ (w − c)/(1 − c̄w)` with `w = e^{-i·rotation}z`.
    pub fn inverse_apply(&self, z: Complex64) -> Result<Complex64> {
        Self::check_closed_disc(z)?;
        let c = self.c.z();
        let w = Complex64::from_polar(1.0, -self.rotation) * z;
        let den = Complex64::new(1.0, 0.0) - c.conj() * w;
        if den.norm() < ALGEBRAIC_TOL {
            return Err(Error::Domain(format!(
                "denominator 1 − c̄z vanishes at z = {z}"
            )));
        }
        Ok((w - c) / den)
    }

    pub fn apply_disc(&self, z: DiscPoint) -> Result<DiscPoint> {
        self.apply(z.z()).and_then(clamp_disc)
    }

    pub fn inverse_apply_disc(&self, z: DiscPoint) -> Result<DiscPoint> {
        self.inverse_apply(z.z()).and_then(clamp_disc)
    }

    pub fn apply_circle(&self, p: CirclePoint) -> Result<CirclePoint> {
        Ok(CirclePoint::new(self.apply(p.z())?.arg()))
    }

    pub fn inverse_apply_circle(&self, p: CirclePoint) -> Result<CirclePoint> {
        Ok(CirclePoint::new(self.inverse_apply(p.z())?.arg()))
    }

    /// `|L'(e^{iθ})| = (1 − |c|²)/|1 + c̄e^{iθ}|²`, the boundary Jacobian.
    pub fn boundary_jacobian(&self, theta: f64) -> f64 {
        let c = self.c.z();
        let e = Complex64::from_polar(1.0, theta);
        (1.0 - c.norm_sqr()) / (Complex64::new(1.0, 0.0) + c.conj() * e).norm_sqr()
    }
}

// Images of disc points can round onto the circle when |c| is within an ulp of 1.
fn clamp_disc(z: Complex64) -> Result<DiscPoint> {
    DiscPoint::from_complex(z).or_else(|_| {
        let r = z.norm();
        if r < 1.0 + ALGEBRAIC_TOL {
            DiscPoint::from_polar(1.0 - f64::EPSILON, z.arg())
        } else {
            Err(Error::Domain(format!("image {z} left the disc")))
        }
    })
}

/// Pseudo-hyperbolic distance `|(z − w)/(1 − w̄z)|`.
pub fn pseudo_distance(z: DiscPoint, w: DiscPoint) -> f64 {
    let (z, w) = (z.z(), w.z());
    let num = z - w;
    if num.norm_sqr() == 0.0 {
        return 0.0;
    }
    (num / (Complex64::new(1.0, 0.0) - w.conj() * z)).norm()
}

/// The pseudo-hyperbolic disc `{z : ρ(z, c) < η}` as a Euclidean disc.
///
/// Returns `(center, radius)` with center `(1 − η²)c/(1 − η²|c|²)` and radius
/// `η(1 − |c|²)/(1 − η²|c|²)`.
pub fn pseudo_disc_euclidean(c: DiscPoint, eta: f64) -> Result<(DiscPoint, f64)> {
    if !(eta > 0.0 && eta < 1.0) {
        return Err(Error::Domain(format!("eta = {eta} must lie in (0, 1)")));
    }
    let e2 = eta * eta;
    let c2 = c.z().norm_sqr();
    let den = 1.0 - e2 * c2;
    let center = DiscPoint::from_complex(c.z() * ((1.0 - e2) / den))?;
    Ok((center, eta * (1.0 - c2) / den))
}

/// Mid-point of the arc orthogonal to the unit circle joining `e^{iα}` and `e^{iβ}`.
///
/// With `γ = (β − α)/2` the orthogonal circle has center `e^{i(α+β)/2}/cos γ` and
/// radius `tan γ`; its point nearest the origin is `e^{i(α+β)/2}(1 − sin γ)/cos γ`.
pub fn orthogonal_arc_midpoint(alpha: f64, beta: f64) -> Result<DiscPoint> {
    let span = beta - alpha;
    if !(span > 0.0 && span < PI) {
        return Err(Error::Domain(format!(
            "arc span β − α = {span} must lie in (0, π)"
        )));
    }
    let gamma = span / 2.0;
    let t = (1.0 - gamma.sin()) / gamma.cos();
    DiscPoint::from_polar(t, (alpha + beta) / 2.0)
}

/// Angle of the far endpoint of the orthogonal arc starting at `e^{iα}` and
/// passing through `c`.
///
/// `L_c⁻¹` sends that arc to a diameter, so the endpoint is `L_c(−L_c⁻¹(e^{iα}))`.
pub fn arc_partner_endpoint(c: DiscPoint, alpha: f64) -> Result<f64> {
    let m = MobiusAut::new(c);
    let w = m.inverse_apply(Complex64::from_polar(1.0, alpha))?;
    Ok(m.apply(-w)?.arg())
}

/// Circular arc from `e^{iα}` to `e^{iβ}` orthogonal to the unit circle.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ArcRepr", into = "ArcRepr")]
pub struct OrthogonalArc {
    alpha: f64,
    beta: f64,
    midpoint: DiscPoint,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct ArcRepr {
    alpha: f64,
    beta: f64,
}

impl TryFrom<ArcRepr> for OrthogonalArc {
    type Error = Error;

    fn try_from(r: ArcRepr) -> Result<Self> {
        OrthogonalArc::new(r.alpha, r.beta)
    }
}

impl From<OrthogonalArc> for ArcRepr {
    fn from(a: OrthogonalArc) -> Self {
        ArcRepr {
            alpha: a.alpha,
            beta: a.beta,
        }
    }
}

impl OrthogonalArc {
    pub fn new(alpha: f64, beta: f64) -> Result<Self> {
        if !(alpha >= -PI && beta < PI && alpha < beta) {
            return Err(Error::Domain(format!(
                "arc endpoints must satisfy -π ≤ α < β < π, got ({alpha}, {beta})"
            )));
        }
        let midpoint = orthogonal_arc_midpoint(alpha, beta)?;
        Ok(OrthogonalArc {
            alpha,
            beta,
            midpoint,
        })
    }

    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    pub fn beta(&self) -> f64 {
        self.beta
    }

    pub fn midpoint(&self) -> DiscPoint {
        self.midpoint
    }

    /// Center and radius of the full circle carrying the arc.
    pub fn circle(&self) -> (Complex64, f64) {
        let gamma = (self.beta - self.alpha) / 2.0;
        let dir = Complex64::from_polar(1.0, (self.alpha + self.beta) / 2.0);
        (dir / gamma.cos(), gamma.tan())
    }

    /// Euclidean distance from `p` to the carrying circle.
    pub fn distance_to(&self, p: Complex64) -> f64 {
        let (center, radius) = self.circle();
        ((p - center).norm() - radius).abs()
    }
}
