//! Exact Bezout coefficients by iterated extended Euclid over `Q(i)`.
//!
//! Every `f64` is a dyadic rational, so the input coefficients convert without
//! loss and the whole gcd chain is computed exactly; only the final cofactors
//! are rounded back to floating point.

use num_complex::{Complex, Complex64};
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

use super::{BezoutCertificate, GridSpec, SolveMethod};
use crate::error::{Error, Result};
use crate::function::{poly_roots, FunctionSpec};

type Q = Complex<BigRational>;
type Poly = Vec<Q>;

/// Residual threshold an exact certificate must meet after rounding.
pub const EXACT_TOL: f64 = 1e-10;
/// Gcd roots this close to the circle count as lying on it.
const ROOT_TOL: f64 = 1e-12;

fn to_q(z: Complex64) -> Result<Q> {
    let conv = |x: f64| {
        BigRational::from_float(x)
            .ok_or_else(|| Error::Domain(format!("non-finite coefficient {x}")))
    };
    Ok(Complex::new(conv(z.re)?, conv(z.im)?))
}

fn to_c64(q: &Q) -> Complex64 {
    let f = |r: &BigRational| r.to_f64().unwrap_or(f64::NAN);
    Complex64::new(f(&q.re), f(&q.im))
}

fn trim(mut p: Poly) -> Poly {
    while p.last().is_some_and(|c| c.is_zero()) {
        p.pop();
    }
    p
}

fn add(a: &[Q], b: &[Q]) -> Poly {
    let n = a.len().max(b.len());
    let z = Q::zero();
    trim((0..n).map(|i| a.get(i).unwrap_or(&z) + b.get(i).unwrap_or(&z)).collect())
}

fn neg(a: &[Q]) -> Poly {
    a.iter().map(|c| -c.clone()).collect()
}

fn mul(a: &[Q], b: &[Q]) -> Poly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Q::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] = &out[i + j] + x * y;
        }
    }
    trim(out)
}

fn scale(a: &[Q], s: &Q) -> Poly {
    trim(a.iter().map(|c| c * s).collect())
}

/// Quotient and remainder; `b` must be nonzero.
fn divrem(a: &[Q], b: &[Q]) -> (Poly, Poly) {
    let lead_inv = Q::one() / b.last().expect("nonzero divisor").clone();
    let mut r = a.to_vec();
    if r.len() < b.len() {
        return (Vec::new(), r);
    }
    let mut q = vec![Q::zero(); r.len() - b.len() + 1];
    while r.len() >= b.len() && !r.is_empty() {
        let shift = r.len() - b.len();
        let c = r.last().unwrap() * &lead_inv;
        for (i, bi) in b.iter().enumerate() {
            r[shift + i] = &r[shift + i] - &c * bi;
        }
        q[shift] = c;
        r.pop();
        r = trim(r);
    }
    (trim(q), r)
}

/// Returns `(g, s, t)` with `s·a + t·b = g` and `g` monic (or zero).
fn ext_gcd(a: &[Q], b: &[Q]) -> (Poly, Poly, Poly) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![Q::one()], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![Q::one()]);
    while !r1.is_empty() {
        let (q, r) = divrem(&r0, &r1);
        let s = add(&s0, &neg(&mul(&q, &s1)));
        let t = add(&t0, &neg(&mul(&q, &t1)));
        r0 = std::mem::replace(&mut r1, r);
        s0 = std::mem::replace(&mut s1, s);
        t0 = std::mem::replace(&mut t1, t);
    }
    if let Some(lead) = r0.last().cloned() {
        let inv = Q::one() / lead;
        (scale(&r0, &inv), scale(&s0, &inv), scale(&t0, &inv))
    } else {
        (r0, s0, t0)
    }
}

fn to_coeffs(p: &[Q]) -> Vec<Complex64> {
    p.iter().map(to_c64).collect()
}

/// Solves `Σ f_k g_k ≡ 1` for polynomial `f_k`.
///
/// The gcd chain `d_2 = gcd(f_1, f_2)`, `d_3 = gcd(d_2, f_3)`, … is built with
/// back-substituted cofactors. A constant final gcd yields polynomial `g_k`;
/// a gcd whose roots all lie outside the closed disc yields rational
/// `g_k = u_k/d`; a gcd with a root in the closed disc means the corona
/// condition fails.
pub fn bezout_exact(polys: &[FunctionSpec], grid: &GridSpec) -> Result<BezoutCertificate> {
    if polys.is_empty() {
        return Err(Error::Domain("bezout_exact needs at least one polynomial".into()));
    }
    grid.validate()?;
    let qs = polys
        .iter()
        .map(|f| {
            let c = f.as_polynomial().ok_or_else(|| {
                Error::Domain(format!("bezout_exact needs polynomials, got {}", f.kind()))
            })?;
            c.iter().map(|&z| to_q(z)).collect::<Result<Poly>>().map(trim)
        })
        .collect::<Result<Vec<_>>>()?;

    let mut d = qs[0].clone();
    let mut cof: Vec<Poly> = vec![vec![Q::one()]];
    for f in &qs[1..] {
        let (g, s, t) = ext_gcd(&d, f);
        for u in cof.iter_mut() {
            *u = mul(u, &s);
        }
        cof.push(t);
        d = g;
    }
    if d.is_empty() {
        return Err(Error::Unsolvable("all functions vanish identically".into()));
    }

    let solutions = if d.len() == 1 {
        let inv = Q::one() / d[0].clone();
        cof.iter()
            .map(|u| FunctionSpec::polynomial(to_coeffs(&scale(u, &inv))))
            .collect()
    } else {
        let den = to_coeffs(&d);
        if let Some(r) = poly_roots(&den)?.into_iter().find(|r| r.norm() <= 1.0 + ROOT_TOL) {
            return Err(Error::Unsolvable(format!(
                "common zero {r} in the closed disc; the corona condition fails"
            )));
        }
        cof.iter()
            .map(|u| FunctionSpec::rational(to_coeffs(u), den.clone()))
            .collect::<Result<Vec<_>>>()?
    };
    Ok(BezoutCertificate::assemble(
        polys,
        solutions,
        &grid.points(),
        grid.boundary,
        SolveMethod::Exact,
        None,
        EXACT_TOL,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn int(n: i64) -> Q {
        Complex::new(BigRational::from_integer(n.into()), BigRational::zero())
    }

    fn rp(c: &[f64]) -> FunctionSpec {
        FunctionSpec::real_polynomial(c)
    }

    fn coeffs(f: &FunctionSpec) -> Vec<Complex64> {
        f.as_polynomial().unwrap().to_vec()
    }

    #[test]
    fn euclid_identity_holds_exactly() {
        let a = vec![int(-6), int(11), int(-6), int(1)]; // (z-1)(z-2)(z-3)
        let b = vec![int(-2), int(1)];
        let (g, s, t) = ext_gcd(&a, &b);
        assert_eq!(g, b);
        assert_eq!(add(&mul(&s, &a), &mul(&t, &b)), g);
        let (q, r) = divrem(&a, &b);
        assert!(r.is_empty());
        assert_eq!(mul(&q, &b), a);
    }

    #[test]
    fn z_squared_anchor() {
        let cert = bezout_exact(&[rp(&[0.0, 0.0, 1.0]), rp(&[-0.5, 1.0])], &GridSpec::default())
            .unwrap();
        assert_eq!(coeffs(&cert.solutions[0]), vec![Complex64::new(4.0, 0.0)]);
        assert_eq!(
            coeffs(&cert.solutions[1]),
            vec![Complex64::new(-2.0, 0.0), Complex64::new(-4.0, 0.0)]
        );
        assert!(cert.residual_sup < 1e-12);
        assert!(cert.passed);
        assert_eq!(cert.norm_report, vec![4.0, 6.0]);
    }

    #[test]
    fn complementary_pair() {
        let cert = bezout_exact(&[rp(&[0.0, 1.0]), rp(&[1.0, -1.0])], &GridSpec::default()).unwrap();
        assert_eq!(coeffs(&cert.solutions[0]), vec![Complex64::new(1.0, 0.0)]);
        assert_eq!(coeffs(&cert.solutions[1]), vec![Complex64::new(1.0, 0.0)]);
        assert!(cert.residual_sup < 1e-15);
    }

    #[test]
    fn near_common_zero_surfaces_large_norms() {
        let eps = 1e-6;
        let cert = bezout_exact(&[rp(&[0.0, 1.0]), rp(&[eps, 1.0])], &GridSpec::default()).unwrap();
        for n in &cert.norm_report {
            assert!((n * eps - 1.0).abs() < 1e-9, "norm {n}");
        }
    }

    #[test]
    fn three_term_chain() {
        let f = [rp(&[0.0, 0.0, 1.0]), rp(&[-0.25, 0.0, 1.0]), rp(&[0.5, 1.0])];
        let cert = bezout_exact(&f, &GridSpec::default()).unwrap();
        assert_eq!(cert.solutions.len(), 3);
        assert!(cert.residual_sup < 1e-12);
    }

    #[test]
    fn complex_coefficients() {
        let i = Complex64::new(0.0, 1.0);
        let f = [
            FunctionSpec::polynomial(vec![-0.5 * i, Complex64::new(1.0, 0.0)]),
            FunctionSpec::polynomial(vec![Complex64::new(0.25, 0.0), i, Complex64::new(1.0, 0.0)]),
        ];
        let cert = bezout_exact(&f, &GridSpec::default()).unwrap();
        assert!(cert.residual_sup < 1e-12);
    }

    #[test]
    fn common_zero_inside_is_unsolvable() {
        let err = bezout_exact(&[rp(&[0.0, 1.0]), rp(&[0.0, 0.0, 1.0])], &GridSpec::default())
            .unwrap_err();
        assert!(matches!(err, Error::Unsolvable(_)));
        let err = bezout_exact(&[rp(&[-1.0, 1.0]), rp(&[1.0, -2.0, 1.0])], &GridSpec::default())
            .unwrap_err();
        assert!(matches!(err, Error::Unsolvable(_)), "root on the circle");
    }

    #[test]
    fn exterior_gcd_gives_rational_solutions() {
        // both share the factor (z - 3)
        let f = [rp(&[0.0, -3.0, 1.0]), rp(&[-1.5, -2.5, 1.0])];
        let cert = bezout_exact(&f, &GridSpec::default()).unwrap();
        assert!(cert.solutions.iter().all(|g| g.kind() == "rational"));
        assert!(cert.residual_sup < 1e-12);
    }

    #[test]
    fn single_function() {
        let cert = bezout_exact(&[rp(&[2.0])], &GridSpec::default()).unwrap();
        assert_eq!(coeffs(&cert.solutions[0]), vec![Complex64::new(0.5, 0.0)]);

        let cert = bezout_exact(&[rp(&[-1.0, 0.5])], &GridSpec::default()).unwrap();
        assert_eq!(cert.solutions[0].kind(), "rational");
        assert!(cert.residual_sup < 1e-14);

        assert!(bezout_exact(&[rp(&[0.0, 1.0])], &GridSpec::default()).is_err());
        assert!(bezout_exact(&[rp(&[])], &GridSpec::default()).is_err());
    }

    #[test]
    fn rejects_non_polynomials() {
        let b = FunctionSpec::FiniteBlaschke(crate::BlaschkeProduct::identity());
        assert!(matches!(
            bezout_exact(&[b], &GridSpec::default()),
            Err(Error::Domain(_))
        ));
    }
}
