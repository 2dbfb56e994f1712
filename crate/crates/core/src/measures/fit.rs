use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use super::density::{Piece, SimpleDensity};
use crate::error::{Error, Result};
use crate::function::FunctionSpec;
use crate::quadrature::{PanelRule, DEFAULT_NODES};

/// A prescribed value for one function.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TargetEntry {
    pub f: FunctionSpec,
    pub value: Complex64,
}

/// Finitely many prescribed values `f_k ↦ v_k` of a representing measure.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct TargetFunctional {
    pub entries: Vec<TargetEntry>,
}

impl TargetFunctional {
    pub fn new(entries: Vec<TargetEntry>) -> Self {
        TargetFunctional { entries }
    }

    /// Entries whose value exceeds the sup-norm estimate of their function.
    pub fn inconsistent(&self) -> Vec<usize> {
        self.entries
            .iter()
            .enumerate()
            .filter(|(_, e)| e.value.norm() > e.f.sup_norm_estimate())
            .map(|(k, _)| k)
            .collect()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FitOptions {
    /// Half-width `ε₀` of the window `(−ε₀, ε₀)` holding the partition.
    pub window: f64,
    pub nodes: usize,
    pub max_iter: usize,
}

impl Default for FitOptions {
    fn default() -> Self {
        FitOptions {
            window: PI,
            nodes: DEFAULT_NODES,
            max_iter: 50_000,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub density: SimpleDensity,
    /// `|v_k − ∫ f_k s dm|` for each target.
    pub residuals: Vec<f64>,
    pub iterations: usize,
}

/// Partition of `(−ε₀, ε₀)` with cells on each side of 0, geometrically
/// refined toward 0 by `ratio ∈ (0, 1]` (`ratio = 1` is uniform).
pub fn graded_partition(window: f64, cells_per_side: usize, ratio: f64) -> Result<Vec<(f64, f64)>> {
    if !(window > 0.0 && window <= PI) || cells_per_side == 0 || !(ratio > 0.0 && ratio <= 1.0) {
        return Err(Error::Domain(format!(
            "bad partition parameters: window {window}, cells {cells_per_side}, ratio {ratio}"
        )));
    }
    let mut right = vec![0.0];
    for k in 1..=cells_per_side {
        let x = if ratio == 1.0 {
            window * k as f64 / cells_per_side as f64
        } else {
            window * ratio.powi((cells_per_side - k) as i32)
        };
        right.push(x);
    }
    let mut cells: Vec<(f64, f64)> = right.windows(2).rev().map(|w| (-w[1], -w[0])).collect();
    cells.extend(right.windows(2).map(|w| (w[0], w[1])));
    Ok(cells)
}

// Euclidean projection onto the probability simplex.
fn project_simplex(v: &[f64]) -> Vec<f64> {
    let mut u = v.to_vec();
    u.sort_by(|a, b| b.total_cmp(a));
    let mut cum = 0.0;
    let mut tau = 0.0;
    for (i, &ui) in u.iter().enumerate() {
        cum += ui;
        let t = (cum - 1.0) / (i + 1) as f64;
        if ui - t > 0.0 {
            tau = t;
        }
    }
    v.iter().map(|&x| (x - tau).max(0.0)).collect()
}

/// Fits a step density on `partition` matching every target within `eps`.
///
/// The unknowns are the probabilities `w_i` of the cells; each target row is
/// the cell average of `f_k`. The mean-square misfit is minimized over the
/// simplex by accelerated projected gradient, starting from the uniform
/// density, so unconstrained directions stay at their uniform values.
pub fn fit_simple_density(
    targets: &TargetFunctional,
    partition: &[(f64, f64)],
    eps: f64,
    options: &FitOptions,
) -> Result<FitResult> {
    if partition.is_empty() {
        return Err(Error::Domain("empty partition".into()));
    }
    let w0 = options.window;
    for &(a, b) in partition {
        if a.is_nan() || b.is_nan() || a >= b {
            return Err(Error::Domain(format!("partition cell [{a}, {b}) is empty")));
        }
        if a < -w0 || b > w0 || a < -PI || b > PI {
            return Err(Error::Domain(format!(
                "partition cell [{a}, {b}) leaves the window (−{w0}, {w0})"
            )));
        }
        if a < 0.0 && b > 0.0 {
            return Err(Error::Domain(format!(
                "partition cell [{a}, {b}) straddles 0; cells must sit in [0, ε₀) or (−ε₀, 0]"
            )));
        }
    }
    let mut cells = partition.to_vec();
    cells.sort_by(|x, y| x.0.total_cmp(&y.0));
    if cells.windows(2).any(|w| w[0].1 > w[1].0) {
        return Err(Error::Domain("partition cells overlap".into()));
    }

    let n = cells.len();
    let total_len: f64 = cells.iter().map(|(a, b)| b - a).sum();
    let uniform: Vec<f64> = cells.iter().map(|(a, b)| (b - a) / total_len).collect();

    // rows: real and imaginary parts of the cell averages of each f_k
    let m = targets.entries.len();
    let per_cell = (options.nodes / n).max(16);
    let mut rows = vec![vec![0.0; n]; 2 * m];
    let mut rhs = vec![0.0; 2 * m];
    for (i, &(a, b)) in cells.iter().enumerate() {
        let rule = PanelRule::new(&[a, b], per_cell);
        let scale = 2.0 * PI / (b - a);
        for (k, e) in targets.entries.iter().enumerate() {
            let avg = rule.integrate(|t| e.f.eval(Complex64::from_polar(1.0, t))) * scale;
            rows[2 * k][i] = avg.re;
            rows[2 * k + 1][i] = avg.im;
        }
    }
    for (k, e) in targets.entries.iter().enumerate() {
        rhs[2 * k] = e.value.re;
        rhs[2 * k + 1] = e.value.im;
    }

    let residuals_of = |w: &[f64]| -> Vec<f64> {
        (0..m)
            .map(|k| {
                let re: f64 = rows[2 * k].iter().zip(w).map(|(a, x)| a * x).sum::<f64>() - rhs[2 * k];
                let im: f64 = rows[2 * k + 1].iter().zip(w).map(|(a, x)| a * x).sum::<f64>() - rhs[2 * k + 1];
                re.hypot(im)
            })
            .collect()
    };
    let worst = |r: &[f64]| r.iter().copied().fold(0.0, f64::max);

    let mut w = uniform.clone();
    let mut iterations = 0;
    if m > 0 && worst(&residuals_of(&w)) >= eps {
        let lipschitz: f64 = rows.iter().flatten().map(|a| a * a).sum::<f64>().max(f64::MIN_POSITIVE);
        let step = 1.0 / lipschitz;
        let mut y = w.clone();
        let mut t = 1.0f64;
        let target = 0.5 * eps;
        for it in 0..options.max_iter {
            iterations = it + 1;
            let mut grad = vec![0.0; n];
            for (row, &b) in rows.iter().zip(&rhs) {
                let r: f64 = row.iter().zip(&y).map(|(a, x)| a * x).sum::<f64>() - b;
                for (g, a) in grad.iter_mut().zip(row) {
                    *g += a * r;
                }
            }
            let moved: Vec<f64> = y.iter().zip(&grad).map(|(x, g)| x - step * g).collect();
            let w_next = project_simplex(&moved);
            let t_next = 0.5 * (1.0 + (1.0 + 4.0 * t * t).sqrt());
            y = w_next
                .iter()
                .zip(&w)
                .map(|(a, b)| a + (t - 1.0) / t_next * (a - b))
                .collect();
            w = w_next;
            t = t_next;
            if it % 64 == 0 && worst(&residuals_of(&w)) < target {
                break;
            }
        }
    }

    let residuals = residuals_of(&w);
    if m > 0 && worst(&residuals) >= eps {
        return Err(Error::Infeasible {
            reason: format!(
                "best fit misses the targets by {:e}, more than eps = {eps:e}",
                worst(&residuals)
            ),
            best_residuals: residuals,
        });
    }
    let pieces = cells
        .iter()
        .zip(&w)
        .filter(|(_, &p)| p > 0.0)
        .map(|(&(a, b), &p)| Piece {
            a,
            b,
            coeff: p * 2.0 * PI / (b - a),
        })
        .collect();
    let density = SimpleDensity::normalized(pieces)?;
    Ok(FitResult {
        density,
        residuals,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::disc::DiscPoint;
    use crate::measures::poisson_integral;

    #[test]
    fn simplex_projection() {
        let p = project_simplex(&[0.5, 0.5, 0.5]);
        assert!(p.iter().all(|&x| (x - 1.0 / 3.0).abs() < 1e-15));
        let p = project_simplex(&[2.0, 0.0]);
        assert_eq!(p, vec![1.0, 0.0]);
    }

    #[test]
    fn no_targets_gives_uniform_density() {
        let cells = graded_partition(0.5, 4, 1.0).unwrap();
        let fit = fit_simple_density(&TargetFunctional::default(), &cells, 1e-3, &FitOptions::default()).unwrap();
        let c0 = fit.density.pieces()[0].coeff;
        assert!(fit.density.pieces().iter().all(|p| (p.coeff - c0).abs() < 1e-12));
        assert_eq!(fit.density.pieces().len(), 8);
    }

    #[test]
    fn matches_poisson_values() {
        let z = DiscPoint::real(0.99);
        let fs = vec![
            FunctionSpec::identity(),
            FunctionSpec::real_polynomial(&[0.0, 0.0, 1.0]),
            FunctionSpec::real_polynomial(&[0.0, 0.0, 0.0, 1.0]),
            FunctionSpec::polynomial(vec![Complex64::new(0.1, 0.2), Complex64::new(0.0, -0.5), Complex64::new(0.3, 0.0)]),
        ];
        let entries = fs
            .into_iter()
            .map(|f| {
                let value = poisson_integral(&f, z, 1 << 14, 1e-9).unwrap().value;
                TargetEntry { f, value }
            })
            .collect();
        let cells = graded_partition(PI, 24, 0.7).unwrap();
        let fit = fit_simple_density(&TargetFunctional::new(entries), &cells, 1e-3, &FitOptions::default()).unwrap();
        assert!(fit.residuals.iter().all(|&r| r < 1e-3));
        assert!((fit.density.total_mass() - 1.0).abs() < 1e-12);
        assert!(fit.density.pieces().iter().all(|p| p.coeff >= 0.0));
    }

    #[test]
    fn value_beyond_sup_norm_is_infeasible() {
        let t = TargetFunctional::new(vec![TargetEntry {
            f: FunctionSpec::identity(),
            value: Complex64::new(5.0, 0.0),
        }]);
        assert_eq!(t.inconsistent(), vec![0]);
        let cells = graded_partition(0.5, 4, 1.0).unwrap();
        match fit_simple_density(&t, &cells, 1e-3, &FitOptions::default()) {
            Err(Error::Infeasible { best_residuals, .. }) => assert!(best_residuals[0] >= 4.0),
            other => panic!("expected infeasible, got {other:?}"),
        }
    }

    #[test]
    fn rejects_straddling_cells() {
        let t = TargetFunctional::default();
        assert!(fit_simple_density(&t, &[(-0.1, 0.1)], 1e-3, &FitOptions::default()).is_err());
        let opts = FitOptions { window: 0.2, ..FitOptions::default() };
        assert!(fit_simple_density(&t, &[(0.0, 0.3)], 1e-3, &opts).is_err());
    }
}
