//! Finite Blaschke products, disc sequences and sectors.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::disc::{canonical_angle, pseudo_distance, DiscPoint, MobiusAut};
use crate::error::{Error, Result};

const ONE: Complex64 = Complex64 { re: 1.0, im: 0.0 };

/// `1 − |z|²` evaluated as `(1 − |z|)(1 + |z|)`.
pub(crate) fn one_minus_abs_sq(z: Complex64) -> f64 {
    let r = z.norm();
    (1.0 - r) * (1.0 + r)
}

/// `1 − |L_c⁻¹(z)|` from `1 − |w|² = (1 − |c|²)(1 − |z|²)/|1 − c̄z|²`.
pub(crate) fn transported_defect(c: Complex64, z: Complex64) -> f64 {
    let s = one_minus_abs_sq(c) * one_minus_abs_sq(z) / (ONE - c.conj() * z).norm_sqr();
    let s = s.clamp(0.0, 1.0);
    s / (1.0 + (1.0 - s).sqrt())
}

/// `M(η) = (1 + η)/(1 − η)`, the factor bounding `1 − |b_k(z)|` on `|z| ≤ η`.
pub fn defect_factor(eta: f64) -> f64 {
    (1.0 + eta) / (1.0 - eta)
}

/// A finite Blaschke product `e^{iγ} ∏ (z̄_k/|z_k|)(z_k − z)/(1 − z̄_k z)`.
///
/// A zero at the origin contributes the factor `z`. Zeros are repeated
/// according to multiplicity. `tail_mass` bounds `Σ(1 − |z_k|)` over zeros
/// omitted by truncation; it is zero for a genuinely finite product.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BlaschkeProduct {
    pub zeros: Vec<DiscPoint>,
    #[serde(default)]
    pub rotation: f64,
    #[serde(default, skip_serializing_if = "is_zero")]
    pub tail_mass: f64,
}

fn is_zero(x: &f64) -> bool {
    *x == 0.0
}

/// Per-zero diagnostic from [`BlaschkeProduct::compose_with_mobius`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TransportDiagnostic {
    pub zero: DiscPoint,
    pub image: DiscPoint,
    /// `1 − |L_c⁻¹(z_k)|`.
    pub defect: f64,
    /// `(1 + |c|)/(1 − |c|)·(1 − |z_k|)`.
    pub bound: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MobiusComposition {
    pub product: BlaschkeProduct,
    pub transport: Vec<TransportDiagnostic>,
}

impl BlaschkeProduct {
    pub fn new(zeros: Vec<DiscPoint>) -> Self {
        BlaschkeProduct {
            zeros,
            rotation: 0.0,
            tail_mass: 0.0,
        }
    }

    pub fn with_rotation(zeros: Vec<DiscPoint>, rotation: f64) -> Self {
        BlaschkeProduct {
            zeros,
            rotation: canonical_angle(rotation),
            tail_mass: 0.0,
        }
    }

    /// The identity map `B(z) = z`.
    pub fn identity() -> Self {
        Self::new(vec![DiscPoint::ORIGIN])
    }

    pub fn degree(&self) -> usize {
        self.zeros.len()
    }

    /// `Σ (1 − |z_k|)` over stored zeros plus the truncation tail.
    pub fn blaschke_sum(&self) -> f64 {
        self.zeros.iter().map(|z| 1.0 - z.norm()).sum::<f64>() + self.tail_mass
    }

    fn unit(a: Complex64) -> Complex64 {
        if a.norm_sqr() == 0.0 {
            -ONE
        } else {
            a.conj() / a.norm()
        }
    }

    fn factor(a: Complex64, z: Complex64) -> Complex64 {
        let num = a - z;
        if num.norm_sqr() == 0.0 {
            return Complex64::new(0.0, 0.0);
        }
        Self::unit(a) * num / (ONE - a.conj() * z)
    }

    fn factor_derivative(a: Complex64, z: Complex64) -> Complex64 {
        let d = ONE - a.conj() * z;
        Self::unit(a) * Complex64::new(a.norm_sqr() - 1.0, 0.0) / (d * d)
    }

    fn rotation_factor(&self) -> Complex64 {
        Complex64::from_polar(1.0, self.rotation)
    }

    fn check_closed(z: Complex64) -> Result<()> {
        if !(z.re.is_finite() && z.im.is_finite()) || z.norm() > 1.0 + 1e-12 {
            return Err(Error::Domain(format!(
                "evaluation point {z} is outside the closed unit disc"
            )));
        }
        Ok(())
    }

    /// Evaluates the product at a point of the closed disc.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64> {
        Self::check_closed(z)?;
        Ok(self.eval_unchecked(z))
    }

    pub(crate) fn eval_unchecked(&self, z: Complex64) -> Complex64 {
        self.zeros
            .iter()
            .fold(self.rotation_factor(), |acc, a| acc * Self::factor(a.z(), z))
    }

    /// Value together with a rigorous bound on the error caused by truncation.
    ///
    /// For `|z| < 1`, `|B(z) − B_N(z)| ≤ (1 + |z|)/(1 − |z|)·tail_mass`.
    pub fn evaluate_with_tail(&self, z: DiscPoint) -> (Complex64, f64) {
        let value = self.eval_unchecked(z.z());
        let radius = if self.tail_mass == 0.0 {
            0.0
        } else {
            defect_factor(z.norm()) * self.tail_mass
        };
        (value, radius)
    }

    /// `B'(z)` from the product rule over the factors, exact at zeros of `B`.
    pub fn derivative(&self, z: Complex64) -> Result<Complex64> {
        Self::check_closed(z)?;
        let n = self.zeros.len();
        let values: Vec<Complex64> = self.zeros.iter().map(|a| Self::factor(a.z(), z)).collect();
        // suffix[k] = ∏_{i ≥ k} values[i]
        let mut suffix = vec![ONE; n + 1];
        for k in (0..n).rev() {
            suffix[k] = suffix[k + 1] * values[k];
        }
        let mut prefix = ONE;
        let mut total = Complex64::new(0.0, 0.0);
        for k in 0..n {
            total += prefix * Self::factor_derivative(self.zeros[k].z(), z) * suffix[k + 1];
            prefix *= values[k];
        }
        Ok(self.rotation_factor() * total)
    }

    /// Rigorous lower bound for `min_{|z| ≤ η} |B(z)|`.
    ///
    /// Each factor satisfies `1 − |b_k(z)| ≤ M(1 − |z_k|)` with `M = (1 + η)/(1 − η)`,
    /// and `∏(1 − x_k) ≥ 1 − Σx_k`, so `|B(z)| ≥ 1 − M·Σ(1 − |z_k|)`.
    pub fn modulus_lower_bound(&self, eta: f64) -> Result<f64> {
        if !(eta > 0.0 && eta < 1.0) {
            return Err(Error::Domain(format!("eta = {eta} must lie in (0, 1)")));
        }
        Ok((1.0 - defect_factor(eta) * self.blaschke_sum()).max(0.0))
    }

    /// `B ∘ L_c` as a Blaschke product with zeros `L_c⁻¹(z_k)`.
    pub fn compose_with_mobius(&self, c: DiscPoint) -> Result<MobiusComposition> {
        let m = MobiusAut::new(c);
        let cz = c.z();
        let bound_factor = defect_factor(c.norm());
        // Compare each factor at ζ = 1, where both sides are unimodular.
        let probe = m.apply(ONE)?;
        let mut rotation = self.rotation;
        let mut zeros = Vec::with_capacity(self.zeros.len());
        let mut transport = Vec::with_capacity(self.zeros.len());
        for &a in &self.zeros {
            let image = m.inverse_apply_disc(a)?;
            let ratio = Self::factor(a.z(), probe) / Self::factor(image.z(), ONE);
            rotation += ratio.arg();
            transport.push(TransportDiagnostic {
                zero: a,
                image,
                defect: transported_defect(cz, a.z()),
                bound: bound_factor * (1.0 - a.norm()),
            });
            zeros.push(image);
        }
        Ok(MobiusComposition {
            product: BlaschkeProduct {
                zeros,
                rotation: canonical_angle(rotation),
                tail_mass: self.tail_mass * bound_factor,
            },
            transport,
        })
    }

    /// Product of two Blaschke products.
    pub fn multiply(&self, other: &BlaschkeProduct) -> BlaschkeProduct {
        let mut zeros = self.zeros.clone();
        zeros.extend_from_slice(&other.zeros);
        BlaschkeProduct {
            zeros,
            rotation: canonical_angle(self.rotation + other.rotation),
            tail_mass: self.tail_mass + other.tail_mass,
        }
    }
}

/// Separation diagnostics of a finite disc sequence.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CarlesonDiagnostics {
    /// `min_k ∏_{j≠k} ρ(z_j, z_k)`; zero when points repeat.
    pub constant: f64,
    /// The separation product for each index.
    pub tail: Vec<f64>,
}

impl CarlesonDiagnostics {
    /// Whether the last separation product exceeds `threshold`.
    pub fn is_thin(&self, threshold: f64) -> bool {
        self.tail.last().is_none_or(|&t| t > threshold)
    }
}

/// A finite truncation of a disc sequence with its cached diagnostics.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(from = "Vec<DiscPoint>", into = "Vec<DiscPoint>")]
pub struct DiscSequence {
    points: Vec<DiscPoint>,
    blaschke_sum: f64,
    diagnostics: CarlesonDiagnostics,
}

impl From<Vec<DiscPoint>> for DiscSequence {
    fn from(points: Vec<DiscPoint>) -> Self {
        DiscSequence::new(points)
    }
}

impl From<DiscSequence> for Vec<DiscPoint> {
    fn from(s: DiscSequence) -> Self {
        s.points
    }
}

impl DiscSequence {
    pub fn new(points: Vec<DiscPoint>) -> Self {
        let blaschke_sum = points.iter().map(|z| 1.0 - z.norm()).sum();
        let diagnostics = carleson_diagnostics(&points);
        DiscSequence {
            points,
            blaschke_sum,
            diagnostics,
        }
    }

    pub fn points(&self) -> &[DiscPoint] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn blaschke_sum(&self) -> f64 {
        self.blaschke_sum
    }

    pub fn diagnostics(&self) -> &CarlesonDiagnostics {
        &self.diagnostics
    }

    /// The Blaschke product vanishing exactly on this sequence.
    pub fn blaschke_product(&self) -> BlaschkeProduct {
        BlaschkeProduct::new(self.points.clone())
    }
}

/// Separation products `∏_{j≠k} ρ(z_j, z_k)` and their minimum.
pub fn carleson_diagnostics(points: &[DiscPoint]) -> CarlesonDiagnostics {
    let tail: Vec<f64> = points
        .iter()
        .enumerate()
        .map(|(k, &zk)| {
            points
                .iter()
                .enumerate()
                .filter(|&(j, _)| j != k)
                .map(|(_, &zj)| pseudo_distance(zj, zk))
                .product()
        })
        .collect();
    let constant = tail.iter().copied().fold(1.0, f64::min);
    CarlesonDiagnostics { constant, tail }
}

/// The sector `S[s, t) = {re^{iθ} : r ∈ [s, t), |θ| ≤ (1 − ℓ)/2}`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Sector {
    ell: f64,
    s: f64,
    t: f64,
}

impl Sector {
    pub fn new(ell: f64, s: f64, t: f64) -> Result<Self> {
        if !(ell > 0.0 && ell < 1.0) {
            return Err(Error::Domain(format!("sector parameter ℓ = {ell} must lie in (0, 1)")));
        }
        if !(ell <= s && s < t && t <= 1.0) {
            return Err(Error::Domain(format!(
                "sector radii must satisfy ℓ ≤ s < t ≤ 1, got ℓ = {ell}, s = {s}, t = {t}"
            )));
        }
        Ok(Sector { ell, s, t })
    }

    pub fn ell(&self) -> f64 {
        self.ell
    }

    pub fn s(&self) -> f64 {
        self.s
    }

    pub fn t(&self) -> f64 {
        self.t
    }

    pub fn half_angle(&self) -> f64 {
        (1.0 - self.ell) / 2.0
    }

    pub fn contains(&self, z: DiscPoint) -> bool {
        let r = z.norm();
        r >= self.s && r < self.t && z.arg().abs() <= self.half_angle()
    }
}

pub fn sector_filter(zeros: &[DiscPoint], sector: &Sector) -> Vec<DiscPoint> {
    zeros.iter().copied().filter(|&z| sector.contains(z)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn pts(v: &[f64]) -> Vec<DiscPoint> {
        v.iter().map(|&x| DiscPoint::real(x)).collect()
    }

    #[test]
    fn zero_at_origin_is_identity() {
        let b = BlaschkeProduct::identity();
        for z in [Complex64::new(0.3, 0.0), Complex64::new(-0.2, 0.7)] {
            assert!((b.evaluate(z).unwrap() - z).norm() < 1e-16);
        }
    }

    #[test]
    fn evaluation_examples() {
        let b = BlaschkeProduct::new(pts(&[0.5]));
        assert!((b.evaluate(Complex64::new(0.0, 0.0)).unwrap() - 0.5).norm() < 1e-16);

        let b = BlaschkeProduct::new(vec![
            DiscPoint::new(0.3, 0.4).unwrap(),
            DiscPoint::new(-0.9, 0.1).unwrap(),
            DiscPoint::ORIGIN,
        ]);
        for z in &b.zeros {
            assert!(b.evaluate(z.z()).unwrap().norm() < 1e-10);
        }
        assert!(b.evaluate(Complex64::new(1.5, 0.0)).is_err());
    }

    #[test]
    fn lower_bound_examples() {
        assert_eq!(BlaschkeProduct::new(vec![]).modulus_lower_bound(0.5).unwrap(), 1.0);
        let b = BlaschkeProduct::new(pts(&[0.9, 0.95]));
        let bound = b.modulus_lower_bound(0.5).unwrap();
        assert!((bound - 0.55).abs() < 1e-12);
        // grid oracle over |z| ≤ 0.5
        let mut min = f64::INFINITY;
        for i in 0..=50 {
            for k in 0..200 {
                let z = Complex64::from_polar(0.5 * i as f64 / 50.0, 2.0 * PI * k as f64 / 200.0);
                min = min.min(b.evaluate(z).unwrap().norm());
            }
        }
        assert!(min >= bound);

        let b = BlaschkeProduct::new(pts(&[0.5]));
        assert_eq!(b.modulus_lower_bound(0.5).unwrap(), 0.0);
        assert!(b.modulus_lower_bound(1.0).is_err());
    }

    #[test]
    fn tail_radius_covers_truncation() {
        let full = BlaschkeProduct::new(pts(&[0.2, 0.95, 0.99, 0.999]));
        let mut trunc = BlaschkeProduct::new(pts(&[0.2]));
        trunc.tail_mass = 0.05 + 0.01 + 0.001;
        let z = DiscPoint::new(0.3, -0.5).unwrap();
        let (v, radius) = trunc.evaluate_with_tail(z);
        assert!((full.evaluate(z.z()).unwrap() - v).norm() <= radius);
    }

    #[test]
    fn compose_examples() {
        let b = BlaschkeProduct::new(vec![
            DiscPoint::new(0.1, 0.2).unwrap(),
            DiscPoint::new(-0.5, 0.6).unwrap(),
        ]);
        let same = b.compose_with_mobius(DiscPoint::ORIGIN).unwrap().product;
        assert_eq!(same.zeros, b.zeros);
        assert!(same.rotation.abs() < 1e-15);

        let id = BlaschkeProduct::identity();
        let c = DiscPoint::real(0.5);
        let comp = id.compose_with_mobius(c).unwrap().product;
        assert_eq!(comp.zeros.len(), 1);
        assert!((comp.zeros[0].z() - Complex64::new(-0.5, 0.0)).norm() < 1e-15);
        let m = MobiusAut::new(c);
        for k in 0..20 {
            let zeta = Complex64::from_polar(0.9, k as f64);
            let direct = m.apply(zeta).unwrap();
            assert!((comp.evaluate(zeta).unwrap() - direct).norm() < 1e-12);
        }
    }

    #[test]
    fn transport_bound_holds() {
        let b = BlaschkeProduct::new(vec![
            DiscPoint::new(0.9, 0.05).unwrap(),
            DiscPoint::new(-0.2, 0.7).unwrap(),
            DiscPoint::real(0.999),
        ]);
        let comp = b.compose_with_mobius(DiscPoint::new(0.6, -0.3).unwrap()).unwrap();
        for t in &comp.transport {
            assert!(t.defect <= t.bound + 1e-15);
            assert!((t.defect - (1.0 - t.image.norm())).abs() < 1e-12);
        }
    }

    #[test]
    fn single_factor_derivative() {
        let c = DiscPoint::new(0.6, 0.3).unwrap();
        let b = BlaschkeProduct::new(vec![c]);
        let d = b.derivative(c.z()).unwrap();
        assert!(((1.0 - c.z().norm_sqr()) * d.norm() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn carleson_examples() {
        let one = carleson_diagnostics(&pts(&[0.4]));
        assert_eq!(one.constant, 1.0);
        let two = carleson_diagnostics(&pts(&[0.0, 0.5]));
        assert!((two.constant - 0.5).abs() < 1e-15);
        let dup = carleson_diagnostics(&pts(&[0.3, 0.3, 0.1]));
        assert_eq!(dup.constant, 0.0);
    }

    #[test]
    fn geometric_sequence_tail_is_brute_force_product() {
        let points: Vec<DiscPoint> = (1..=10).map(|j| DiscPoint::real(1.0 - 4f64.powi(-j))).collect();
        let diag = carleson_diagnostics(&points);
        for k in 0..points.len() {
            let zk = points[k].z();
            let mut p = 1.0;
            for (j, zj) in points.iter().enumerate() {
                if j != k {
                    p *= ((zk - zj.z()) / (1.0 - zj.z().conj() * zk)).norm();
                }
            }
            assert!((diag.tail[k] - p).abs() < 1e-15);
        }
        let min = diag.tail.iter().copied().fold(1.0, f64::min);
        assert_eq!(diag.constant, min);
        assert!(diag.constant > 0.0);
    }

    #[test]
    fn sector_examples() {
        let sec = Sector::new(0.5, 0.75, 0.85).unwrap();
        assert!(sector_filter(&[], &sec).is_empty());
        let zeros = vec![
            DiscPoint::real(0.7),
            DiscPoint::from_polar(0.8, 0.01).unwrap(),
            DiscPoint::from_polar(0.9, 0.4).unwrap(),
        ];
        assert_eq!(sector_filter(&zeros, &sec), vec![zeros[1]]);

        assert!(sec.contains(DiscPoint::real(0.75)));
        assert!(!sec.contains(DiscPoint::real(0.85)));
        assert!(sec.contains(DiscPoint::from_polar(0.8, -0.25).unwrap()));
        assert!(Sector::new(0.5, 0.4, 0.9).is_err());
    }
}
