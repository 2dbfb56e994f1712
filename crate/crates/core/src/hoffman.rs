//! Limits of composition sequences `f ∘ L_j` along disc sequences.
//!
//! Compactness arguments are replaced by their observable shadows: Cauchy
//! profiles of samples on a compact grid, derivative invariants at the
//! sequence points, and Fourier coefficients of boundary values.

use std::f64::consts::PI;
use std::fmt::Write as _;

use num_complex::Complex64;
use rustfft::FftPlanner;
use serde::{Deserialize, Serialize};

use crate::blaschke::{BlaschkeProduct, DiscSequence};
use crate::disc::{DiscPoint, MobiusAut};
use crate::error::{Error, Result};

pub use crate::function::FunctionSpec;

/// Default Cauchy threshold for subsequence extraction.
pub const DEFAULT_CAUCHY_THRESHOLD: f64 = 1e-6;

/// Polar grid on `|ζ| ≤ radius`: the center plus `size` rings of `4·size` points.
pub fn disc_grid(radius: f64, size: usize) -> Vec<Complex64> {
    let mut grid = vec![Complex64::new(0.0, 0.0)];
    let angular = 4 * size;
    for i in 1..=size {
        let r = radius * i as f64 / size as f64;
        for k in 0..angular {
            grid.push(Complex64::from_polar(r, 2.0 * PI * k as f64 / angular as f64));
        }
    }
    grid
}

fn sup_diff(a: &[Complex64], b: &[Complex64]) -> f64 {
    a.iter().zip(b).map(|(x, y)| (x - y).norm()).fold(0.0, f64::max)
}

/// Greedy subsequence along which successive sup-differences strictly decrease.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SubsequenceReport {
    pub indices: Vec<usize>,
    /// Sup-difference between consecutive extracted samples.
    pub gaps: Vec<f64>,
    /// First extracted position whose gap falls below the threshold.
    pub settled_at: Option<usize>,
    pub threshold: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositionTrace {
    pub c_values: Vec<DiscPoint>,
    pub grid: Vec<Complex64>,
    /// `samples[j][g] = f(L_{c_j}(grid[g]))`.
    pub samples: Vec<Vec<Complex64>>,
    /// `cauchy_profile[k] = max_g |samples[k+1][g] − samples[k][g]|`.
    pub cauchy_profile: Vec<f64>,
    /// Unimodular constant best aligning each sample row with `ζ`.
    pub rotations: Vec<f64>,
    /// `max_g |e^{−iγ_j} samples[j][g] − grid[g]|`.
    pub normalized_identity_error: Vec<f64>,
    pub extraction: SubsequenceReport,
}

impl CompositionTrace {
    /// CSV rows `j,grid_re,grid_im,re,im`.
    pub fn to_csv(&self) -> String {
        let mut out = String::from("j,grid_re,grid_im,re,im\n");
        for (j, row) in self.samples.iter().enumerate() {
            for (g, v) in self.grid.iter().zip(row) {
                let _ = writeln!(out, "{j},{},{},{},{}", g.re, g.im, v.re, v.im);
            }
        }
        out
    }
}

/// Samples `f ∘ L_j` on a disc grid and extracts a Cauchy subsequence.
pub fn compose_trace(
    f: &FunctionSpec,
    seq: &DiscSequence,
    grid_radius: f64,
    grid_size: usize,
    threshold: f64,
) -> Result<CompositionTrace> {
    if !(grid_radius > 0.0 && grid_radius < 1.0) {
        return Err(Error::Domain(format!("grid radius {grid_radius} must lie in (0, 1)")));
    }
    if grid_size == 0 {
        return Err(Error::Domain("grid size must be positive".into()));
    }
    let grid = disc_grid(grid_radius, grid_size);
    let mut samples = Vec::with_capacity(seq.len());
    for &c in seq.points() {
        let m = MobiusAut::new(c);
        let row = grid
            .iter()
            .map(|&z| m.apply(z).map(|w| f.eval(w)))
            .collect::<Result<Vec<_>>>()?;
        samples.push(row);
    }
    let cauchy_profile = samples.windows(2).map(|w| sup_diff(&w[1], &w[0])).collect();

    let mut rotations = Vec::with_capacity(samples.len());
    let mut normalized_identity_error = Vec::with_capacity(samples.len());
    for row in &samples {
        let corr: Complex64 = row.iter().zip(&grid).map(|(s, z)| s * z.conj()).sum();
        let gamma = if corr.norm() > 0.0 { corr.arg() } else { 0.0 };
        let back = Complex64::from_polar(1.0, -gamma);
        let err = row
            .iter()
            .zip(&grid)
            .map(|(s, z)| (back * s - z).norm())
            .fold(0.0, f64::max);
        rotations.push(gamma);
        normalized_identity_error.push(err);
    }

    let extraction = extract_subsequence(&samples, threshold);
    Ok(CompositionTrace {
        c_values: seq.points().to_vec(),
        grid,
        samples,
        cauchy_profile,
        rotations,
        normalized_identity_error,
        extraction,
    })
}

fn extract_subsequence(samples: &[Vec<Complex64>], threshold: f64) -> SubsequenceReport {
    let mut indices = Vec::new();
    let mut gaps = Vec::new();
    if !samples.is_empty() {
        indices.push(0);
        let mut last = 0;
        let mut prev = f64::INFINITY;
        for j in 1..samples.len() {
            let d = sup_diff(&samples[j], &samples[last]);
            if d < prev {
                indices.push(j);
                gaps.push(d);
                prev = d;
                last = j;
            }
        }
    }
    let settled_at = gaps.iter().position(|&g| g < threshold).map(|p| p + 1);
    SubsequenceReport {
        indices,
        gaps,
        settled_at,
        threshold,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SchwarzEntry {
    pub j: usize,
    pub value_at_cj: Complex64,
    /// `(1 − |c_j|²)|B'(c_j)| = |(B ∘ L_{c_j})'(0)|`.
    pub derivative_invariant: f64,
}

/// Values and derivative invariants of `B` along the sequence.
pub fn schwarz_check(seq: &DiscSequence, b: &BlaschkeProduct) -> Result<Vec<SchwarzEntry>> {
    seq.points()
        .iter()
        .enumerate()
        .map(|(j, &c)| {
            let value_at_cj = b.evaluate(c.z())?;
            let d = b.derivative(c.z())?;
            let r = c.norm();
            Ok(SchwarzEntry {
                j,
                value_at_cj,
                derivative_invariant: (1.0 - r) * (1.0 + r) * d.norm(),
            })
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct L2Report {
    /// `‖B ∘ L_c − ζ‖₂`.
    pub distance: f64,
    /// The same distance after rotating `B ∘ L_c` so that `a₁ ≥ 0`.
    pub normalized_distance: f64,
    /// Phase of `a₁`.
    pub rotation: f64,
    /// Discrete Fourier coefficients `a_0, …, a_{n−1}` of the boundary samples.
    pub coeffs: Vec<Complex64>,
    /// `Σ |a_k|²`.
    pub parseval: f64,
    pub parseval_ok: bool,
    /// Energy in the top quarter of the spectrum.
    pub tail_energy: f64,
    /// `B(c)`, computed directly.
    pub a0_direct: Complex64,
    /// `(1 − |c|²)B'(c)`, computed directly.
    pub a1_direct: Complex64,
}

const PARSEVAL_TOL: f64 = 1e-6;
const ALIAS_TOL: f64 = 1e-3;

/// `L²` distance on the circle between `B ∘ L_c` and the identity.
pub fn l2_distance_to_identity(b: &BlaschkeProduct, c: DiscPoint, n_fft: usize) -> Result<L2Report> {
    if n_fft < 256 || !n_fft.is_power_of_two() {
        return Err(Error::Domain(format!("n_fft = {n_fft} must be a power of two ≥ 256")));
    }
    let m = MobiusAut::new(c);
    let mut buf = (0..n_fft)
        .map(|k| {
            let z = Complex64::from_polar(1.0, 2.0 * PI * k as f64 / n_fft as f64);
            m.apply(z).and_then(|w| b.evaluate(w))
        })
        .collect::<Result<Vec<_>>>()?;
    FftPlanner::new().plan_fft_forward(n_fft).process(&mut buf);
    let scale = 1.0 / n_fft as f64;
    let coeffs: Vec<Complex64> = buf.into_iter().map(|a| a * scale).collect();

    let tail_energy: f64 = coeffs[3 * n_fft / 4..].iter().map(|a| a.norm_sqr()).sum();
    if tail_energy > ALIAS_TOL {
        return Err(Error::Aliasing { n_fft, tail_energy });
    }
    let parseval: f64 = coeffs.iter().map(|a| a.norm_sqr()).sum();
    let high: f64 = coeffs[2..].iter().map(|a| a.norm_sqr()).sum();
    let (a0, a1) = (coeffs[0], coeffs[1]);
    let distance = (a0.norm_sqr() + (a1 - 1.0).norm_sqr() + high).sqrt();
    let normalized_distance = (a0.norm_sqr() + (a1.norm() - 1.0).powi(2) + high).sqrt();
    let r = c.norm();
    Ok(L2Report {
        distance,
        normalized_distance,
        rotation: if a1.norm() > 0.0 { a1.arg() } else { 0.0 },
        coeffs,
        parseval,
        parseval_ok: (parseval - 1.0).abs() <= PARSEVAL_TOL,
        tail_energy,
        a0_direct: b.evaluate(c.z())?,
        a1_direct: b.derivative(c.z())? * ((1.0 - r) * (1.0 + r)),
    })
}
