//! Independent re-verification of Bezout certificates.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use super::{bezout_sum, circle_nodes, BezoutCertificate, CoronaInstance, GridSpec};

/// Uniform random points of the closed disc added to every check.
pub const RANDOM_CHECK_POINTS: usize = 10_000;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CheckReport {
    pub residual_sup: f64,
    /// Location of the largest residual.
    pub worst_point: Complex64,
    pub tolerance: f64,
    pub passed: bool,
    /// Boundary sup estimate of each `g_k` on the jittered circle.
    pub norm_report: Vec<f64>,
    pub points_checked: usize,
    /// Number of solutions differs from the number of functions.
    pub length_mismatch: bool,
}

fn check_points(grid: &GridSpec, rng: &mut ChaCha8Rng) -> (Vec<Complex64>, Vec<Complex64>) {
    let g = GridSpec {
        radial: grid.radial + 3,
        angular: grid.angular + 5,
        boundary: grid.boundary + 7,
        ratio: grid.ratio,
    };
    let mut pts = vec![Complex64::new(0.0, 0.0)];
    for r in g.radii().into_iter().skip(1) {
        let phase = rng.gen::<f64>() * 2.0 * PI / g.angular as f64;
        pts.extend(circle_nodes(r, g.angular, phase));
    }
    let phase = rng.gen::<f64>() * 2.0 * PI / g.boundary as f64;
    let boundary: Vec<Complex64> = circle_nodes(1.0, g.boundary, phase).collect();
    pts.extend(boundary.iter().copied());
    for _ in 0..RANDOM_CHECK_POINTS {
        let r = rng.gen::<f64>().sqrt();
        pts.push(Complex64::from_polar(r, rng.gen_range(-PI..PI)));
    }
    (pts, boundary)
}

/// Recomputes the residual of `cert` on a seeded grid unrelated to the one it
/// was produced on. Missing solutions count as zero.
pub fn check_certificate(
    instance: &CoronaInstance,
    cert: &BezoutCertificate,
    tol: f64,
    seed: u64,
) -> CheckReport {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (pts, boundary) = check_points(&instance.grid, &mut rng);
    let mut residual_sup = 0.0;
    let mut worst_point = Complex64::new(0.0, 0.0);
    for &z in &pts {
        let r = (bezout_sum(&instance.functions, &cert.solutions, z) - 1.0).norm();
        if r > residual_sup || r.is_nan() {
            residual_sup = r;
            worst_point = z;
        }
    }
    let norm_report = cert
        .solutions
        .iter()
        .map(|g| boundary.iter().map(|&z| g.eval(z).norm()).fold(0.0, f64::max))
        .collect();
    CheckReport {
        residual_sup,
        worst_point,
        tolerance: tol,
        passed: residual_sup <= tol,
        norm_report,
        points_checked: pts.len(),
        length_mismatch: cert.solutions.len() != instance.functions.len(),
    }
}
