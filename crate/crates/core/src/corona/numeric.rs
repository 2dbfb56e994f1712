//! Polynomial Bezout coefficients by boundary least squares.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use super::{circle_nodes, BezoutCertificate, CoronaInstance, SolveMethod};
use crate::error::{Error, Result};
use crate::function::FunctionSpec;

pub const DEFAULT_NUMERIC_TOL: f64 = 1e-8;
/// Singular values below this fraction of the largest are discarded.
const RANK_TOL: f64 = 1e-12;

fn fit_count(unknowns: usize) -> usize {
    4 * unknowns + 16
}

/// Minimum-norm least-squares `g_k` of degree `≤ degree` on `m` circle nodes.
fn fit(functions: &[FunctionSpec], degree: usize, m: usize) -> Result<Vec<FunctionSpec>> {
    let n_f = functions.len();
    let cols = n_f * (degree + 1);
    let nodes: Vec<Complex64> = circle_nodes(1.0, m, 0.0).collect();
    let vals: Vec<Vec<Complex64>> = nodes
        .iter()
        .map(|&z| functions.iter().map(|f| f.eval(z)).collect())
        .collect();
    let a = DMatrix::from_fn(m, cols, |i, j| {
        let (k, d) = (j / (degree + 1), j % (degree + 1));
        vals[i][k] * nodes[i].powu(d as u32)
    });
    let b = DVector::from_element(m, Complex64::new(1.0, 0.0));
    let svd = a.svd(true, true);
    let cutoff = svd.singular_values.max() * RANK_TOL;
    let x = svd.solve(&b, cutoff).map_err(|e| Error::Domain(e.to_string()))?;
    Ok((0..n_f)
        .map(|k| FunctionSpec::polynomial(x.rows(k * (degree + 1), degree + 1).iter().copied().collect()))
        .collect())
}

/// Escalates the degree up to `degree_cap` until the verified residual is
/// within `tol`; otherwise returns the best certificate, flagged as failing.
///
/// Fitting uses `4·N(d+1) + 16` circle nodes; verification uses the instance
/// grid's interior nodes plus a circle grid of a different, larger count.
pub fn bezout_numeric(instance: &CoronaInstance, degree_cap: usize, tol: f64) -> Result<BezoutCertificate> {
    let f = &instance.functions;
    if f.is_empty() {
        return Err(Error::Domain("bezout_numeric needs at least one function".into()));
    }
    if instance.delta_hat.is_nan() || instance.delta_hat <= 0.0 {
        return Err(Error::Precondition(format!(
            "corona condition fails on the grid: delta_hat = {}",
            instance.delta_hat
        )));
    }
    instance.grid.validate()?;
    let interior = instance.grid.interior_points();
    let mut best: Option<BezoutCertificate> = None;
    for degree in 0..=degree_cap {
        let m = fit_count(f.len() * (degree + 1));
        let solutions = fit(f, degree, m)?;
        let v = instance.grid.boundary.max(2 * m) + 1;
        let mut verification = interior.clone();
        verification.extend(circle_nodes(1.0, v, 0.0));
        let cert = BezoutCertificate::assemble(
            f,
            solutions,
            &verification,
            v,
            SolveMethod::Numeric,
            Some(degree),
            tol,
        );
        let done = cert.passed;
        if best.as_ref().is_none_or(|b| cert.residual_sup < b.residual_sup) {
            best = Some(cert);
        }
        if done {
            break;
        }
    }
    Ok(best.expect("at least one degree is tried"))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corona::{bezout_exact, GridSpec};

    fn rp(c: &[f64]) -> FunctionSpec {
        FunctionSpec::real_polynomial(c)
    }

    fn instance(f: Vec<FunctionSpec>) -> CoronaInstance {
        CoronaInstance::new(f, GridSpec::default()).unwrap()
    }

    #[test]
    fn agrees_with_exact_solution() {
        let f = vec![rp(&[0.0, 0.0, 1.0]), rp(&[-0.5, 1.0])];
        let exact = bezout_exact(&f, &GridSpec::default()).unwrap();
        let inst = instance(f);
        let cert = bezout_numeric(&inst, 8, 1e-12).unwrap();
        assert!(cert.residual_sup < 1e-8, "{}", cert.residual_sup);
        assert!((cert.residual_sup - exact.residual_sup).abs() < 1e-8);
        assert_eq!(cert.method, SolveMethod::Numeric);
    }

    #[test]
    fn invertible_single_function() {
        let inst = instance(vec![rp(&[-1.0, 0.5])]);
        let cert = bezout_numeric(&inst, 20, 1e-12).unwrap();
        assert!(cert.residual_sup < 1e-5);
        assert!(!cert.passed);
        assert_eq!(cert.degree, Some(20));
        // Taylor coefficients of 2/(z - 2) = -Σ (z/2)^k
        let g = cert.solutions[0].as_polynomial().unwrap();
        assert!((g[0] + 1.0).norm() < 1e-4);
        assert!((g[1] + 0.5).norm() < 1e-4);
    }

    #[test]
    fn escalation_stops_early() {
        let inst = instance(vec![rp(&[0.0, 1.0]), rp(&[1.0, -1.0])]);
        let cert = bezout_numeric(&inst, 10, 1e-10).unwrap();
        assert!(cert.passed);
        assert_eq!(cert.degree, Some(0));
    }

    #[test]
    fn zero_delta_is_a_precondition_error() {
        let inst = instance(vec![rp(&[0.0, 1.0]), rp(&[0.0, 0.0, 1.0])]);
        assert_eq!(inst.delta_hat, 0.0);
        assert!(matches!(bezout_numeric(&inst, 4, 1e-8), Err(Error::Precondition(_))));
    }
}
