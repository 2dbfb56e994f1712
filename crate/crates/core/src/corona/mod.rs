//! Bezout identities `Σ f_k g_k ≡ 1` under the corona condition.
//!
//! The condition `Σ|f_k| ≥ δ > 0` is measured on a closed-disc grid, solutions
//! come either from exact extended Euclid over `Q(i)` or from boundary least
//! squares, and every certificate can be re-verified on an independent grid.

mod check;
mod cluster;
mod exact;
mod numeric;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

use crate::error::{Error, Result};
use crate::function::FunctionSpec;

pub use check::{check_certificate, CheckReport, RANDOM_CHECK_POINTS};
pub use cluster::{cluster_scenario, ClusterReport, TailHit};
pub use exact::bezout_exact;
pub use numeric::{bezout_numeric, DEFAULT_NUMERIC_TOL};

/// Sampling plan for the closed disc.
///
/// Interior radii are `{0} ∪ {i/radial} ∪ {1 − ratio^i}` for `1 ≤ i < radial`
/// and `1 ≤ i ≤ radial`, each carrying `angular` equispaced nodes; the circle
/// carries `boundary` nodes. Doubling every count yields a superset.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct GridSpec {
    pub radial: usize,
    pub angular: usize,
    pub boundary: usize,
    pub ratio: f64,
}

impl Default for GridSpec {
    fn default() -> Self {
        GridSpec {
            radial: 16,
            angular: 64,
            boundary: 256,
            ratio: 0.5,
        }
    }
}

impl GridSpec {
    pub fn new(radial: usize, angular: usize, boundary: usize, ratio: f64) -> Result<Self> {
        let g = GridSpec {
            radial,
            angular,
            boundary,
            ratio,
        };
        g.validate()?;
        Ok(g)
    }

    pub fn validate(&self) -> Result<()> {
        if self.radial < 8 || self.angular < 8 || self.boundary < 8 {
            return Err(Error::Domain(format!(
                "grid counts must be at least 8, got radial {} angular {} boundary {}",
                self.radial, self.angular, self.boundary
            )));
        }
        if !(self.ratio > 0.0 && self.ratio < 1.0) {
            return Err(Error::Domain(format!("grid ratio {} must lie in (0, 1)", self.ratio)));
        }
        Ok(())
    }

    /// Doubles every count; the refined node set contains the original one.
    pub fn refine(&self) -> Self {
        GridSpec {
            radial: 2 * self.radial,
            angular: 2 * self.angular,
            boundary: 2 * self.boundary,
            ratio: self.ratio,
        }
    }

    /// Sorted, deduplicated interior radii, all `< 1`.
    pub fn radii(&self) -> Vec<f64> {
        let mut r = vec![0.0];
        r.extend((1..self.radial).map(|i| i as f64 / self.radial as f64));
        r.extend((1..=self.radial).map(|i| 1.0 - self.ratio.powi(i as i32)));
        r.retain(|&x| x < 1.0);
        r.sort_by(f64::total_cmp);
        r.dedup();
        r
    }

    pub fn interior_points(&self) -> Vec<Complex64> {
        let mut pts = vec![Complex64::new(0.0, 0.0)];
        for r in self.radii().into_iter().skip(1) {
            pts.extend(circle_nodes(r, self.angular, 0.0));
        }
        pts
    }

    pub fn boundary_points(&self) -> Vec<Complex64> {
        circle_nodes(1.0, self.boundary, 0.0).collect()
    }

    /// Interior followed by boundary nodes.
    pub fn points(&self) -> Vec<Complex64> {
        let mut p = self.interior_points();
        p.extend(self.boundary_points());
        p
    }
}

pub(crate) fn circle_nodes(r: f64, n: usize, phase: f64) -> impl Iterator<Item = Complex64> {
    (0..n).map(move |k| Complex64::from_polar(r, phase + 2.0 * PI * k as f64 / n as f64))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DeltaReport {
    pub delta: f64,
    pub argmin: Complex64,
}

/// Minimum of `Σ|f_k|` over the closed-disc grid.
///
/// `Σ|f_k|` is subharmonic, so its minimum may sit anywhere in the disc and
/// the interior nodes matter as much as the boundary ones.
pub fn measure_delta(functions: &[FunctionSpec], grid: &GridSpec) -> Result<DeltaReport> {
    if functions.is_empty() {
        return Err(Error::Domain("measure_delta needs at least one function".into()));
    }
    grid.validate()?;
    let mut best = DeltaReport {
        delta: f64::INFINITY,
        argmin: Complex64::new(0.0, 0.0),
    };
    for z in grid.points() {
        let s: f64 = functions.iter().map(|f| f.eval(z).norm()).sum();
        if s < best.delta {
            best = DeltaReport { delta: s, argmin: z };
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CoronaInstance {
    pub functions: Vec<FunctionSpec>,
    pub delta_hat: f64,
    pub grid: GridSpec,
}

impl CoronaInstance {
    /// Builds an instance, measuring `delta_hat` on `grid`.
    pub fn new(functions: Vec<FunctionSpec>, grid: GridSpec) -> Result<Self> {
        let delta_hat = measure_delta(&functions, &grid)?.delta;
        Ok(CoronaInstance {
            functions,
            delta_hat,
            grid,
        })
    }

    /// Residual `Σ f_k g_k − 1` at `z`; missing solutions count as zero.
    pub fn residual_at(&self, solutions: &[FunctionSpec], z: Complex64) -> Complex64 {
        bezout_sum(&self.functions, solutions, z) - 1.0
    }
}

pub(crate) fn bezout_sum(f: &[FunctionSpec], g: &[FunctionSpec], z: Complex64) -> Complex64 {
    f.iter().zip(g).map(|(f, g)| f.eval(z) * g.eval(z)).sum()
}

pub(crate) fn residual_sup(f: &[FunctionSpec], g: &[FunctionSpec], points: &[Complex64]) -> f64 {
    points
        .iter()
        .map(|&z| (bezout_sum(f, g, z) - 1.0).norm())
        .fold(0.0, f64::max)
}

pub(crate) fn boundary_sup(g: &FunctionSpec, n: usize) -> f64 {
    circle_nodes(1.0, n, 0.0).map(|z| g.eval(z).norm()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SolveMethod {
    Exact,
    Numeric,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BezoutCertificate {
    pub solutions: Vec<FunctionSpec>,
    /// `max |Σ f_k g_k − 1|` over the verification grid.
    pub residual_sup: f64,
    /// Boundary sup estimate of each `g_k`.
    pub norm_report: Vec<f64>,
    pub method: SolveMethod,
    /// Polynomial degree used by the numeric solver.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub degree: Option<usize>,
    pub tolerance: f64,
    pub passed: bool,
}

impl BezoutCertificate {
    pub(crate) fn assemble(
        instance_functions: &[FunctionSpec],
        solutions: Vec<FunctionSpec>,
        verification: &[Complex64],
        boundary_nodes: usize,
        method: SolveMethod,
        degree: Option<usize>,
        tolerance: f64,
    ) -> Self {
        let residual_sup = residual_sup(instance_functions, &solutions, verification);
        let norm_report = solutions.iter().map(|g| boundary_sup(g, boundary_nodes)).collect();
        BezoutCertificate {
            solutions,
            residual_sup,
            norm_report,
            method,
            degree,
            tolerance,
            passed: residual_sup <= tolerance,
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn z2_pair() -> Vec<FunctionSpec> {
        vec![
            FunctionSpec::real_polynomial(&[0.0, 0.0, 1.0]),
            FunctionSpec::real_polynomial(&[-0.5, 1.0]),
        ]
    }

    #[test]
    fn grid_validation_and_radii() {
        assert!(GridSpec::new(4, 16, 16, 0.5).is_err());
        assert!(GridSpec::new(8, 16, 16, 1.0).is_err());
        let g = GridSpec::default();
        let r = g.radii();
        assert_eq!(r[0], 0.0);
        assert!(r.iter().all(|&x| x < 1.0));
        assert!(r.windows(2).all(|w| w[0] < w[1]));
        assert!(r.contains(&0.5));
    }

    #[test]
    fn refinement_is_a_superset() {
        let g = GridSpec::new(8, 8, 8, 0.5).unwrap();
        let fine = g.refine().points();
        for p in g.points() {
            assert!(fine.iter().any(|q| (p - q).norm() < 1e-15), "{p} missing");
        }
    }

    #[test]
    fn delta_examples() {
        let g = GridSpec::default();
        let two = measure_delta(&[FunctionSpec::constant(Complex64::new(2.0, 0.0))], &g).unwrap();
        assert_eq!(two.delta, 2.0);

        let d = measure_delta(
            &[FunctionSpec::identity(), FunctionSpec::constant(Complex64::new(1.0, 0.0))],
            &g,
        )
        .unwrap();
        assert_eq!(d.delta, 1.0);
        assert_eq!(d.argmin, Complex64::new(0.0, 0.0));

        let d = measure_delta(&z2_pair(), &g).unwrap();
        assert!((d.delta - 0.25).abs() < 1e-15);
        assert!((d.argmin - 0.5).norm() < 1e-15);
        assert!(measure_delta(&[], &g).is_err());
    }

    #[test]
    fn delta_matches_brute_force() {
        let f = z2_pair();
        let n = 600;
        let mut oracle = f64::INFINITY;
        for i in 0..=n {
            for k in 0..n {
                let z = Complex64::from_polar(i as f64 / n as f64, 2.0 * PI * k as f64 / n as f64);
                oracle = oracle.min(f.iter().map(|f| f.eval(z).norm()).sum());
            }
        }
        let d = measure_delta(&f, &GridSpec::default()).unwrap();
        assert!((d.delta - oracle).abs() < 1e-3);
        assert!(d.delta <= oracle + 1e-15);
    }

    #[test]
    fn refinement_never_increases_delta() {
        let f = vec![
            FunctionSpec::real_polynomial(&[0.3, -1.1, 0.4]),
            FunctionSpec::real_polynomial(&[-0.2, 0.0, 0.9]),
        ];
        let mut g = GridSpec::new(8, 8, 8, 0.6).unwrap();
        let mut last = measure_delta(&f, &g).unwrap().delta;
        for _ in 0..3 {
            g = g.refine();
            let d = measure_delta(&f, &g).unwrap().delta;
            assert!(d <= last);
            last = d;
        }
    }

    #[test]
    fn instance_round_trips_through_json() {
        let inst = CoronaInstance::new(z2_pair(), GridSpec::default()).unwrap();
        let s = serde_json::to_string(&inst).unwrap();
        assert!(s.contains(r#""grid":{"radial":16,"angular":64,"boundary":256,"ratio":0.5}"#));
        let back: CoronaInstance = serde_json::from_str(&s).unwrap();
        assert_eq!(back, inst);
    }
}
