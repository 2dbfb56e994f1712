//! Probability densities on the circle.
//!
//! Poisson kernels, step densities fitted to finitely many prescribed
//! functional values, quartile points and arc alignment, and pushforward
//! under disc automorphisms.

mod density;
mod fit;
mod pushforward;
mod quartiles;

use num_complex::Complex64;

pub use density::{Piece, SimpleDensity};
pub use fit::{fit_simple_density, graded_partition, FitOptions, FitResult, TargetEntry, TargetFunctional};
pub use pushforward::{pushforward_density, PushforwardDensity};
pub use quartiles::{align_arcs, quartiles, AlignCase, CaseTag, QuartilePair};

use crate::disc::DiscPoint;
use crate::error::{Error, Result};
use crate::function::FunctionSpec;
use crate::quadrature::trapezoid_periodic;

/// `P_z(θ) = (1 − |z|²)/|e^{iθ} − z|²`.
pub fn poisson_kernel(z: DiscPoint, theta: f64) -> f64 {
    let z = z.z();
    let r2 = z.norm_sqr();
    // |e^{iθ} − z|² = 1 − 2Re(z̄e^{iθ}) + |z|²
    let den = 1.0 - 2.0 * (z.re * theta.cos() + z.im * theta.sin()) + r2;
    (1.0 - r2) / den
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PoissonIntegral {
    pub value: Complex64,
    /// `|T_n − T_{n/2}|` for the periodic trapezoid rule.
    pub error_estimate: f64,
}

/// `∫ f(e^{iθ}) P_z(θ) dm(θ)` by the periodic trapezoid rule on `nodes` points.
pub fn poisson_integral(f: &FunctionSpec, z: DiscPoint, nodes: usize, tol: f64) -> Result<PoissonIntegral> {
    poisson_integral_with(|t| f.eval(Complex64::from_polar(1.0, t)), z, nodes, tol)
}

/// Poisson integral of arbitrary boundary data.
pub fn poisson_integral_with<F: Fn(f64) -> Complex64>(
    boundary: F,
    z: DiscPoint,
    nodes: usize,
    tol: f64,
) -> Result<PoissonIntegral> {
    if nodes < 16 || !nodes.is_multiple_of(2) {
        return Err(Error::Domain(format!("node count {nodes} must be even and at least 16")));
    }
    let integrand = |t: f64| boundary(t) * poisson_kernel(z, t);
    let value = trapezoid_periodic(integrand, nodes);
    let coarse = trapezoid_periodic(integrand, nodes / 2);
    let error_estimate = (value - coarse).norm();
    if error_estimate > tol {
        return Err(Error::Quadrature {
            estimate: error_estimate,
            tolerance: tol,
        });
    }
    Ok(PoissonIntegral { value, error_estimate })
}
