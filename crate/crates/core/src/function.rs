//! Desk-scale representatives of bounded analytic functions on the disc.

use nalgebra::{DMatrix, Schur};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::blaschke::BlaschkeProduct;
use crate::error::{Error, Result};

/// Horner evaluation of `Σ a_k z^k` (ascending coefficients).
pub fn poly_eval(coeffs: &[Complex64], z: Complex64) -> Complex64 {
    coeffs
        .iter()
        .rev()
        .fold(Complex64::new(0.0, 0.0), |acc, &a| acc * z + a)
}

/// Drops trailing zero coefficients.
pub fn poly_trim(coeffs: &[Complex64]) -> Vec<Complex64> {
    let len = coeffs
        .iter()
        .rposition(|c| c.norm_sqr() != 0.0)
        .map_or(0, |i| i + 1);
    coeffs[..len].to_vec()
}

/// Roots of a polynomial, from the eigenvalues of its companion matrix
/// polished by Newton steps.
pub fn poly_roots(coeffs: &[Complex64]) -> Result<Vec<Complex64>> {
    let p = poly_trim(coeffs);
    if p.is_empty() {
        return Err(Error::Domain("the zero polynomial has no finite root set".into()));
    }
    let n = p.len() - 1;
    if n == 0 {
        return Ok(Vec::new());
    }
    let lead = p[n];
    let mut m = DMatrix::<Complex64>::zeros(n, n);
    for i in 1..n {
        m[(i, i - 1)] = Complex64::new(1.0, 0.0);
    }
    for i in 0..n {
        m[(i, n - 1)] = -p[i] / lead;
    }
    let eig = Schur::new(m)
        .eigenvalues()
        .ok_or_else(|| Error::Domain("companion eigenvalue iteration failed".into()))?;
    let dp: Vec<Complex64> = (1..=n).map(|k| p[k] * k as f64).collect();
    Ok(eig
        .iter()
        .map(|&r0| {
            let mut r = r0;
            for _ in 0..3 {
                let d = poly_eval(&dp, r);
                if d.norm() == 0.0 {
                    break;
                }
                let step = poly_eval(&p, r) / d;
                if !(step.re.is_finite() && step.im.is_finite()) {
                    break;
                }
                r -= step;
            }
            if poly_eval(&p, r).norm() <= poly_eval(&p, r0).norm() {
                r
            } else {
                r0
            }
        })
        .collect())
}

/// A bounded analytic function on the closed disc.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "FunctionRepr", into = "FunctionRepr")]
pub enum FunctionSpec {
    /// `Σ a_k z^k`, ascending coefficients.
    Polynomial { coeffs: Vec<Complex64> },
    FiniteBlaschke(BlaschkeProduct),
    /// `num/den` with every root of `den` outside the closed disc.
    Rational {
        num: Vec<Complex64>,
        den: Vec<Complex64>,
    },
}

#[derive(Serialize, Deserialize)]
#[serde(tag = "kind", content = "data", rename_all = "snake_case")]
enum FunctionRepr {
    Polynomial(PolyData),
    FiniteBlaschke(BlaschkeProduct),
    Rational(RationalData),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct PolyData {
    coeffs: Vec<Complex64>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct RationalData {
    num: Vec<Complex64>,
    den: Vec<Complex64>,
}

impl TryFrom<FunctionRepr> for FunctionSpec {
    type Error = Error;

    fn try_from(r: FunctionRepr) -> Result<Self> {
        match r {
            FunctionRepr::Polynomial(p) => Ok(FunctionSpec::polynomial(p.coeffs)),
            FunctionRepr::FiniteBlaschke(b) => Ok(FunctionSpec::FiniteBlaschke(b)),
            FunctionRepr::Rational(r) => FunctionSpec::rational(r.num, r.den),
        }
    }
}

impl From<FunctionSpec> for FunctionRepr {
    fn from(f: FunctionSpec) -> Self {
        match f {
            FunctionSpec::Polynomial { coeffs } => FunctionRepr::Polynomial(PolyData { coeffs }),
            FunctionSpec::FiniteBlaschke(b) => FunctionRepr::FiniteBlaschke(b),
            FunctionSpec::Rational { num, den } => FunctionRepr::Rational(RationalData { num, den }),
        }
    }
}

impl FunctionSpec {
    pub fn polynomial(coeffs: Vec<Complex64>) -> Self {
        FunctionSpec::Polynomial {
            coeffs: poly_trim(&coeffs),
        }
    }

    /// Polynomial from real ascending coefficients.
    pub fn real_polynomial(coeffs: &[f64]) -> Self {
        Self::polynomial(coeffs.iter().map(|&c| Complex64::new(c, 0.0)).collect())
    }

    pub fn constant(c: Complex64) -> Self {
        Self::polynomial(vec![c])
    }

    pub fn identity() -> Self {
        Self::real_polynomial(&[0.0, 1.0])
    }

    pub fn rational(num: Vec<Complex64>, den: Vec<Complex64>) -> Result<Self> {
        let den = poly_trim(&den);
        if den.is_empty() {
            return Err(Error::Domain("rational function with zero denominator".into()));
        }
        if let Some(p) = poly_roots(&den)?.into_iter().find(|p| p.norm() <= 1.0) {
            return Err(Error::Domain(format!(
                "denominator root {p} lies in the closed unit disc"
            )));
        }
        Ok(FunctionSpec::Rational {
            num: poly_trim(&num),
            den,
        })
    }

    pub fn kind(&self) -> &'static str {
        match self {
            FunctionSpec::Polynomial { .. } => "polynomial",
            FunctionSpec::FiniteBlaschke(_) => "finite_blaschke",
            FunctionSpec::Rational { .. } => "rational",
        }
    }

    /// Evaluates at a point of the closed disc.
    pub fn eval(&self, z: Complex64) -> Complex64 {
        match self {
            FunctionSpec::Polynomial { coeffs } => poly_eval(coeffs, z),
            FunctionSpec::FiniteBlaschke(b) => b.eval_unchecked(z),
            FunctionSpec::Rational { num, den } => poly_eval(num, z) / poly_eval(den, z),
        }
    }

    /// Upper bound for the sup norm over the closed disc.
    ///
    /// Polynomials use `Σ|a_k|`; rational functions divide that by
    /// `|lead| ∏ (|p_i| − 1)`, a lower bound for `|den|` on the circle.
    pub fn sup_norm_estimate(&self) -> f64 {
        let l1 = |c: &[Complex64]| c.iter().map(|a| a.norm()).sum::<f64>();
        match self {
            FunctionSpec::Polynomial { coeffs } => l1(coeffs),
            // unimodular on the circle up to rounding
            FunctionSpec::FiniteBlaschke(b) => 1.0 + 4.0 * f64::EPSILON * (b.degree() + 1) as f64,
            FunctionSpec::Rational { num, den } => {
                let lead = den.last().map_or(0.0, |c| c.norm());
                let roots = poly_roots(den).unwrap_or_default();
                let floor = roots.iter().fold(lead, |acc, p| acc * (p.norm() - 1.0));
                l1(num) / floor
            }
        }
    }

    /// Ascending coefficients when the function is a polynomial.
    pub fn as_polynomial(&self) -> Option<&[Complex64]> {
        match self {
            FunctionSpec::Polynomial { coeffs } => Some(coeffs),
            _ => None,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    #[test]
    fn roots_of_known_polynomials() {
        // (z − 2)(z + 0.5i)
        let p = vec![
            Complex64::new(0.0, -1.0),
            Complex64::new(-2.0, 0.5),
            Complex64::new(1.0, 0.0),
        ];
        let mut roots = poly_roots(&p).unwrap();
        roots.sort_by(|a, b| a.norm().partial_cmp(&b.norm()).unwrap());
        assert!((roots[0] - Complex64::new(0.0, -0.5)).norm() < 1e-12);
        assert!((roots[1] - Complex64::new(2.0, 0.0)).norm() < 1e-12);
        assert!(poly_roots(&[Complex64::new(3.0, 0.0)]).unwrap().is_empty());
        assert!(poly_roots(&[]).is_err());
    }

    #[test]
    fn rational_rejects_poles_in_disc() {
        let one = vec![Complex64::new(1.0, 0.0)];
        assert!(FunctionSpec::rational(one.clone(), vec![Complex64::new(-0.5, 0.0), Complex64::new(1.0, 0.0)]).is_err());
        assert!(FunctionSpec::rational(one.clone(), vec![Complex64::new(-1.0, 0.0), Complex64::new(1.0, 0.0)]).is_err());
        let f = FunctionSpec::rational(one, vec![Complex64::new(-2.0, 0.0), Complex64::new(1.0, 0.0)]).unwrap();
        assert!((f.eval(Complex64::new(0.0, 0.0)) + 0.5).norm() < 1e-15);
    }

    #[test]
    fn sup_norm_dominates_boundary_samples() {
        let fs = vec![
            FunctionSpec::polynomial(vec![Complex64::new(0.2, 0.1), Complex64::new(-1.0, 0.4), Complex64::new(0.0, 0.7)]),
            FunctionSpec::FiniteBlaschke(BlaschkeProduct::new(vec![crate::disc::DiscPoint::real(0.3)])),
            FunctionSpec::rational(
                vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 1.0)],
                vec![Complex64::new(1.5, 0.0), Complex64::new(0.0, 1.0)],
            )
            .unwrap(),
        ];
        for f in &fs {
            let max = (0..2048)
                .map(|k| f.eval(Complex64::from_polar(1.0, 2.0 * PI * k as f64 / 2048.0)).norm())
                .fold(0.0, f64::max);
            assert!(f.sup_norm_estimate() >= max, "{}", f.kind());
        }
    }

    #[test]
    fn json_shape() {
        let f = FunctionSpec::real_polynomial(&[-0.5, 1.0]);
        let s = serde_json::to_string(&f).unwrap();
        assert_eq!(s, r#"{"kind":"polynomial","data":{"coeffs":[[-0.5,0.0],[1.0,0.0]]}}"#);
        let back: FunctionSpec = serde_json::from_str(&s).unwrap();
        assert_eq!(back, f);
        let bad = r#"{"kind":"rational","data":{"num":[[1,0]],"den":[[0.5,0],[1,0]]}}"#;
        assert!(serde_json::from_str::<FunctionSpec>(bad).is_err());
    }
}
